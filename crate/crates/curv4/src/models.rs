//! Closed-form model geometries and spectral classification of equality
//! cases.
//!
//! The catalog covers the three negative-Ricci locally symmetric models
//! (real hyperbolic, complex hyperbolic, product of hyperbolic planes)
//! together with positive-curvature and flat controls that exercise the
//! "condition fails" paths.

use serde::Serialize;

use crate::conditions::{condition_report, ConditionReport};
use crate::error::{CurvError, Result};
use crate::invariants::{densities, InvariantDensities};
use crate::operator::{decompose, Basis, CurvatureOperator};
use crate::spectrum::SingerThorpeSpectrum;
use crate::tensor::CurvatureTensor;

/// Expected condition verdicts of a catalog model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectedConditions {
    pub nic: bool,
    pub nnic: bool,
    pub npco: bool,
    pub supk: bool,
}

/// One model geometry: a constant curvature operator plus its invariants.
#[derive(Clone, Debug, Serialize)]
pub struct ManifoldModel {
    pub name: &'static str,
    pub spectrum: SingerThorpeSpectrum,
    pub kaehler: bool,
    /// Volume normalization that makes `chi` and `tau` integers.
    pub canonical_volume: f64,
    pub expected: ExpectedConditions,
    pub densities: InvariantDensities,
    pub notes: &'static str,
}

impl ManifoldModel {
    pub fn tensor(&self) -> CurvatureTensor {
        CurvatureTensor::from_singer_thorpe(&self.spectrum)
    }

    pub fn operator(&self) -> CurvatureOperator {
        CurvatureOperator::from_tensor(&self.tensor(), Basis::SelfDual)
    }

    pub fn conditions(&self, tol: f64) -> Result<ConditionReport> {
        condition_report(&self.operator(), tol)
    }
}

const PI2: f64 = std::f64::consts::PI * std::f64::consts::PI;

fn model(
    name: &'static str,
    lambda: [f64; 3],
    mu: [f64; 3],
    kaehler: bool,
    canonical_volume: f64,
    expected: ExpectedConditions,
    notes: &'static str,
) -> ManifoldModel {
    let spectrum = SingerThorpeSpectrum::from_lambda_mu(lambda, mu)
        .expect("catalog spectra satisfy the trace constraints");
    let densities = densities(&CurvatureTensor::from_singer_thorpe(&spectrum), 1e-8)
        .expect("catalog spectra are Einstein");
    ManifoldModel { name, spectrum, kaehler, canonical_volume, expected, densities, notes }
}

/// All built-in models. Immutable data, safe to share.
pub fn catalog() -> Vec<ManifoldModel> {
    vec![
        model(
            "H4",
            [-1.0, -1.0, -1.0],
            [0.0; 3],
            false,
            8.0 * PI2 / 3.0,
            ExpectedConditions { nic: true, nnic: false, npco: true, supk: true },
            "real hyperbolic space of curvature -1; rho = -3, chi-density 3/(4 pi^2)",
        ),
        model(
            "CH2",
            [-4.0, -1.0, -1.0],
            [-2.0, 1.0, 1.0],
            true,
            PI2,
            ExpectedConditions { nic: true, nnic: false, npco: true, supk: true },
            "complex hyperbolic plane, holomorphic sectional curvature -4; rho = -6",
        ),
        model(
            "H2xH2",
            [-1.0, 0.0, 0.0],
            [0.0; 3],
            true,
            4.0 * PI2,
            ExpectedConditions { nic: true, nnic: false, npco: true, supk: false },
            "product of two hyperbolic planes of curvature -1; rho = -1",
        ),
        model(
            "S4",
            [1.0, 1.0, 1.0],
            [0.0; 3],
            false,
            8.0 * PI2 / 3.0,
            ExpectedConditions { nic: false, nnic: true, npco: false, supk: false },
            "round sphere of curvature +1; positive control",
        ),
        model(
            "CP2",
            [4.0, 1.0, 1.0],
            [2.0, -1.0, -1.0],
            true,
            PI2 / 2.0,
            ExpectedConditions { nic: false, nnic: true, npco: false, supk: false },
            "complex projective plane, holomorphic sectional curvature +4; rho = +6",
        ),
        model(
            "S2xS2",
            [1.0, 0.0, 0.0],
            [0.0; 3],
            true,
            16.0 * PI2,
            ExpectedConditions { nic: false, nnic: true, npco: false, supk: false },
            "product of two round spheres of curvature +1; rho = +1",
        ),
        model(
            "Flat",
            [0.0; 3],
            [0.0; 3],
            true,
            1.0,
            ExpectedConditions { nic: true, nnic: true, npco: true, supk: true },
            "flat space; every density vanishes",
        ),
    ]
}

/// Looks a model up by name, case-insensitively.
pub fn find_model(name: &str) -> Option<ManifoldModel> {
    catalog().into_iter().find(|m| m.name.eq_ignore_ascii_case(name))
}

/// Spectral equality classes of the negative-Ricci rigidity statements.
/// Classification is of the pointwise spectrum only; it says nothing about
/// global isometry type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EqualityClass {
    /// `W- = 0` and `W+` has eigenvalues `(2 rho/3, -rho/3, -rho/3)`.
    Ch2Type,
    /// Spectrum `lambda = (rho, 0, 0)`, `mu = 0`.
    H2xH2Type,
    /// `W = 0`: constant sectional curvature.
    H4Type,
    None,
}

/// Matches an Einstein operator with `rho < 0` against the model spectra.
pub fn classify_equality(op: &CurvatureOperator, tol: f64) -> Result<EqualityClass> {
    let spec = op.singer_thorpe_spectrum(tol.max(1e-12)).map_err(|e| match e {
        CurvError::NotBlockDiagonal { norm, tol } => CurvError::NotEinstein { deviation: norm, tol },
        other => other,
    })?;
    let rho = spec.rho();
    if rho >= 0.0 {
        return Err(CurvError::NonnegativeRho(rho));
    }
    let scale = rho.abs().max(1.0);
    let close = |a: f64, b: f64| (a - b).abs() <= tol * scale;

    let t = CurvatureTensor::from_singer_thorpe(&spec);
    let rep = decompose(&t);
    let w_plus = rep.weyl.w_plus;
    let w_minus = rep.weyl.w_minus;
    let w_zero = |w: &[f64; 3]| w.iter().all(|v| close(*v, 0.0));

    if w_zero(&w_plus) && w_zero(&w_minus) {
        return Ok(EqualityClass::H4Type);
    }
    // ascending order of (2rho/3, -rho/3, -rho/3) for rho < 0
    let kaehler_plus = [2.0 * rho / 3.0, -rho / 3.0, -rho / 3.0];
    if w_zero(&w_minus)
        && (0..3).all(|i| close(w_plus[i], kaehler_plus[i]))
    {
        return Ok(EqualityClass::Ch2Type);
    }
    let lambda = spec.lambda();
    let mu = spec.mu();
    if close(lambda[0], rho)
        && close(lambda[1], 0.0)
        && close(lambda[2], 0.0)
        && mu.iter().all(|v| close(*v, 0.0))
    {
        return Ok(EqualityClass::H2xH2Type);
    }
    Ok(EqualityClass::None)
}
