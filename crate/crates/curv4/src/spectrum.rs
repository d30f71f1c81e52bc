//! Singer-Thorpe normal form of Einstein curvature operators.
//!
//! For an Einstein 4-manifold the curvature operator restricted to the
//! self-dual and anti-self-dual 2-form bundles has eigenvalues
//! `lambda_i + mu_i` and `lambda_i - mu_i`, with `sum lambda_i = rho` and
//! `sum mu_i = 0`. This module owns that coordinate system.

use serde::Serialize;

use crate::error::{CurvError, Result};

/// Tolerance on the trace constraints `sum lambda = rho`, `sum mu = 0`.
pub const SPECTRUM_SUM_TOL: f64 = 1e-10;

/// Principal sectional curvatures `lambda`, mixing parameters `mu`, and the
/// Einstein constant `rho`, stored in the simultaneous ascending ordering:
/// both `lambda_i + mu_i` and `lambda_i - mu_i` are non-decreasing in `i`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SingerThorpeSpectrum {
    lambda: [f64; 3],
    mu: [f64; 3],
    rho: f64,
}

/// Re-pairs `(lambda, mu)` so that both eigenvalue triples ascend: sort
/// `a+ = lambda + mu` and `a- = lambda - mu` independently and recombine.
/// The block spectra, and hence the operator up to conjugation, are
/// unchanged.
fn normal_form(lambda: [f64; 3], mu: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let mut a_plus = [lambda[0] + mu[0], lambda[1] + mu[1], lambda[2] + mu[2]];
    let mut a_minus = [lambda[0] - mu[0], lambda[1] - mu[1], lambda[2] - mu[2]];
    a_plus.sort_by(f64::total_cmp);
    a_minus.sort_by(f64::total_cmp);
    let mut l = [0.0; 3];
    let mut m = [0.0; 3];
    for i in 0..3 {
        l[i] = 0.5 * (a_plus[i] + a_minus[i]);
        m[i] = 0.5 * (a_plus[i] - a_minus[i]);
    }
    (l, m)
}

impl SingerThorpeSpectrum {
    pub fn new(lambda: [f64; 3], mu: [f64; 3], rho: f64) -> Result<Self> {
        if lambda.iter().chain(mu.iter()).any(|v| !v.is_finite()) || !rho.is_finite() {
            return Err(CurvError::InvalidSpectrum("non-finite entry".into()));
        }
        let sl: f64 = lambda.iter().sum();
        let sm: f64 = mu.iter().sum();
        let scale = 1.0f64.max(rho.abs());
        if (sl - rho).abs() > SPECTRUM_SUM_TOL * scale {
            return Err(CurvError::InvalidSpectrum(format!(
                "sum(lambda) = {sl} does not match rho = {rho}"
            )));
        }
        if sm.abs() > SPECTRUM_SUM_TOL * scale {
            return Err(CurvError::InvalidSpectrum(format!("sum(mu) = {sm} is not zero")));
        }
        let (lambda, mu) = normal_form(lambda, mu);
        Ok(SingerThorpeSpectrum { lambda, mu, rho })
    }

    /// Like [`new`](Self::new) but with `rho` taken to be `sum lambda`.
    pub fn from_lambda_mu(lambda: [f64; 3], mu: [f64; 3]) -> Result<Self> {
        let rho = lambda.iter().sum();
        Self::new(lambda, mu, rho)
    }

    /// Builds the spectrum from ascending block eigenvalue triples,
    /// pairing ascending self-dual with ascending anti-self-dual.
    pub fn from_block_spectra(a_plus: [f64; 3], a_minus: [f64; 3]) -> Result<Self> {
        let sp: f64 = a_plus.iter().sum();
        let sm: f64 = a_minus.iter().sum();
        let scale = 1.0f64.max(sp.abs()).max(sm.abs());
        if (sp - sm).abs() > SPECTRUM_SUM_TOL * scale {
            return Err(CurvError::InvalidSpectrum(format!(
                "block traces disagree: {sp} vs {sm}"
            )));
        }
        let lambda = [0.0, 1.0, 2.0].map(|i: f64| {
            let i = i as usize;
            0.5 * (a_plus[i] + a_minus[i])
        });
        let mu = [0usize, 1, 2].map(|i| 0.5 * (a_plus[i] - a_minus[i]));
        Self::new(lambda, mu, lambda.iter().sum())
    }

    pub fn lambda(&self) -> [f64; 3] {
        self.lambda
    }

    pub fn mu(&self) -> [f64; 3] {
        self.mu
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Self-dual block eigenvalues `lambda_i + mu_i`, ascending.
    pub fn a_plus(&self) -> [f64; 3] {
        [0, 1, 2].map(|i| self.lambda[i] + self.mu[i])
    }

    /// Anti-self-dual block eigenvalues `lambda_i - mu_i`, ascending.
    pub fn a_minus(&self) -> [f64; 3] {
        [0, 1, 2].map(|i| self.lambda[i] - self.mu[i])
    }

    /// Orientation reversal swaps the two 2-form bundles, i.e. `mu -> -mu`.
    pub fn reverse_orientation(&self) -> Self {
        let (lambda, mu) = normal_form(self.lambda, [-self.mu[0], -self.mu[1], -self.mu[2]]);
        SingerThorpeSpectrum { lambda, mu, rho: self.rho }
    }

    /// Homothety: multiplies all curvatures by `c > 0`.
    pub fn scale(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(CurvError::InvalidSpectrum(format!("scale factor must be positive, got {c}")));
        }
        Ok(SingerThorpeSpectrum {
            lambda: self.lambda.map(|v| c * v),
            mu: self.mu.map(|v| c * v),
            rho: c * self.rho,
        })
    }
}
