//! Euler and signature densities, global invariants of constant-operator
//! geometries, and the inequality reports tying them together.
//!
//! Densities are the Gauss-Bonnet and signature integrands per unit volume:
//! `8 pi^2 e = |W|^2 + s^2/24` and `12 pi^2 t = |W+|^2 - |W-|^2`. For
//! Einstein inputs they equal the diagonalized forms
//! `4 pi^2 e = |lambda|^2 + |mu|^2` and `3 pi^2 t = <lambda, mu>`.

use serde::Serialize;

use crate::conditions::ConditionReport;
use crate::error::{CurvError, Result};
use crate::operator::{decompose, Basis, CurvatureOperator, DecompositionReport};
use crate::par;
use crate::tensor::CurvatureTensor;

/// Relative tolerance for flagging equality in a report.
pub const EQUALITY_REL_TOL: f64 = 1e-7;

const PI2: f64 = std::f64::consts::PI * std::f64::consts::PI;

/// Euler and signature integrands per unit volume, in both the Weyl form
/// and the diagonalized Singer-Thorpe form.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct InvariantDensities {
    /// `(|W|^2 + s^2/24) / (8 pi^2)`
    pub euler_density: f64,
    /// `(|W+|^2 - |W-|^2) / (12 pi^2)`
    pub signature_density: f64,
    /// `(|lambda|^2 + |mu|^2) / (4 pi^2)`
    pub diag_euler: f64,
    /// `<lambda, mu> / (3 pi^2)`
    pub diag_signature: f64,
}

fn sq_norm3(v: &[f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Weyl-form densities of an arbitrary decomposition (no Einstein
/// assumption): returns `(euler_density, signature_density)`.
pub fn eq_form_densities(rep: &DecompositionReport) -> (f64, f64) {
    let w_plus_sq = sq_norm3(&rep.weyl.w_plus);
    let w_minus_sq = sq_norm3(&rep.weyl.w_minus);
    let euler = (w_plus_sq + w_minus_sq + rep.scalar_curvature.powi(2) / 24.0) / (8.0 * PI2);
    let signature = (w_plus_sq - w_minus_sq) / (12.0 * PI2);
    (euler, signature)
}

/// Both density forms of an Einstein tensor. The diagonalized forms need
/// the Singer-Thorpe spectrum, hence the Einstein requirement.
pub fn densities(t: &CurvatureTensor, tol: f64) -> Result<InvariantDensities> {
    t.einstein_constant(tol)?;
    let rep = decompose(t);
    let (euler_density, signature_density) = eq_form_densities(&rep);
    let op = CurvatureOperator::from_tensor(t, Basis::SelfDual);
    let spec = op.singer_thorpe_spectrum(tol.max(1e-12))?;
    let lambda = spec.lambda();
    let mu = spec.mu();
    let cross: f64 = (0..3).map(|i| lambda[i] * mu[i]).sum();
    Ok(InvariantDensities {
        euler_density,
        signature_density,
        diag_euler: (sq_norm3(&lambda) + sq_norm3(&mu)) / (4.0 * PI2),
        diag_signature: cross / (3.0 * PI2),
    })
}

/// Global invariants of a constant-operator geometry: Euler characteristic,
/// signature, volume and Einstein constant. Stored as reals (density times
/// volume); integrality is the caller's concern.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GlobalInvariants {
    pub chi: f64,
    pub tau: f64,
    pub volume: f64,
    pub rho: f64,
}

impl GlobalInvariants {
    pub fn from_constant_model(d: &InvariantDensities, rho: f64, volume: f64) -> Result<Self> {
        if !(volume > 0.0) {
            return Err(CurvError::NonpositiveVolume(volume));
        }
        Ok(GlobalInvariants {
            chi: d.euler_density * volume,
            tau: d.signature_density * volume,
            volume,
            rho,
        })
    }
}

/// One checked inequality: `lhs <= rhs` with slack `rhs - lhs`.
/// Reports gated off by their hypotheses keep `applicable = false` and are
/// never marked failed.
#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    pub equality: bool,
    pub slack: f64,
    pub applicable: bool,
}

/// Builds a report for `lhs <= rhs`, scaled-`tol` satisfaction and
/// relative-tolerance equality detection.
pub fn make_report(name: &str, lhs: f64, rhs: f64, applicable: bool, tol: f64) -> InequalityReport {
    let slack = rhs - lhs;
    let scale = 1.0f64.max(lhs.abs()).max(rhs.abs());
    InequalityReport {
        name: name.to_string(),
        lhs,
        rhs,
        satisfied: !applicable || slack >= -tol * scale,
        equality: applicable && slack.abs() <= EQUALITY_REL_TOL * scale,
        slack,
        applicable,
    }
}

/// Every inequality the invariants support, gated on the condition flags
/// and on `rho < 0` where the statement needs negative Ricci curvature.
pub fn inequality_suite(
    g: &GlobalInvariants,
    cond: &ConditionReport,
    kaehler: bool,
    tol: f64,
) -> Result<Vec<InequalityReport>> {
    if !(g.volume > 0.0) {
        return Err(CurvError::NonpositiveVolume(g.volume));
    }
    let chi = g.chi;
    let at = g.tau.abs();
    let rho2v = g.rho * g.rho * g.volume;
    let neg = g.rho < 0.0;
    Ok(vec![
        // every Einstein 4-manifold
        make_report("hitchin_thorpe", 1.5 * at, chi, true, tol),
        // nonpositive isotropic curvature
        make_report("nic_hitchin_thorpe_15_8", 15.0 / 8.0 * at, chi, cond.nic && neg, tol),
        make_report("kaehler_nic_chi_3tau", 3.0 * at, chi, kaehler && cond.nic && neg, tol),
        make_report("nic_two_sided_lower", 2.0 * chi + 3.0 * at, 1.5 * rho2v / PI2, cond.nic && neg, tol),
        make_report("nic_two_sided_upper", 1.5 * rho2v / PI2, 18.0 * chi - 27.0 * at, cond.nic && neg, tol),
        // nonpositive curvature operator
        make_report("npco_two_sided_lower", 2.0 * chi + 3.0 * at, 0.5 * rho2v / PI2, cond.npco && neg, tol),
        make_report("npco_two_sided_upper", 0.5 * rho2v / PI2, 6.0 * chi - 9.0 * at, cond.npco && neg, tol),
        make_report("npco_chi_3tau", 3.0 * at, chi, cond.npco && neg, tol),
        make_report("npco_volume_bound", chi, 0.25 * rho2v / PI2, cond.npco && neg, tol),
        // sup K <= rho/6
        make_report("supk_volume_bound", chi, rho2v / (6.0 * PI2), cond.supk && neg, tol),
    ])
}

/// Kaehler-Einstein global invariants from the anti-self-dual Weyl
/// eigenvalues `gamma` (trace-free):
/// `8 pi^2 chi = (|gamma|^2 + 4 rho^2/3) V` and
/// `12 pi^2 tau = (2 rho^2/3 - |gamma|^2) V`.
pub fn kaehler_identities(gamma: [f64; 3], rho: f64, volume: f64) -> Result<(f64, f64)> {
    let trace: f64 = gamma.iter().sum();
    let scale = 1.0f64.max(gamma.iter().fold(0.0f64, |m, g| m.max(g.abs())));
    if trace.abs() > 1e-9 * scale {
        return Err(CurvError::InvalidGamma(format!("trace {trace} is not zero")));
    }
    if !(rho < 0.0) {
        return Err(CurvError::InvalidRho(rho));
    }
    if !(volume > 0.0) {
        return Err(CurvError::NonpositiveVolume(volume));
    }
    let g2 = sq_norm3(&gamma);
    let chi = (g2 + 4.0 * rho * rho / 3.0) * volume / (8.0 * PI2);
    let tau = (2.0 * rho * rho / 3.0 - g2) * volume / (12.0 * PI2);
    Ok((chi, tau))
}

/// Checks `|gamma|^2 <= 8 rho^2/3` for ascending trace-free `gamma` with
/// `gamma_1 >= 2 rho/3`, plus the implied bracket `0 <= gamma_3 <= -4 rho/3`.
pub fn gamma_bound_check(gamma: [f64; 3], rho: f64) -> Result<Vec<InequalityReport>> {
    if !(rho < 0.0) {
        return Err(CurvError::InvalidRho(rho));
    }
    if gamma[0] > gamma[1] || gamma[1] > gamma[2] {
        return Err(CurvError::InvalidGamma(format!("triple {gamma:?} is not ascending")));
    }
    let trace: f64 = gamma.iter().sum();
    let scale = 1.0f64.max(rho.abs());
    if trace.abs() > 1e-9 * scale {
        return Err(CurvError::InvalidGamma(format!("trace {trace} is not zero")));
    }
    let bound = 2.0 * rho / 3.0;
    if gamma[0] < bound - 1e-12 * scale {
        return Err(CurvError::ConstraintViolated { gamma1: gamma[0], bound });
    }
    let tol = 1e-9;
    Ok(vec![
        make_report("kaehler_weyl_norm", sq_norm3(&gamma), 8.0 * rho * rho / 3.0, true, tol),
        make_report("gamma3_lower", 0.0, gamma[2], true, tol),
        make_report("gamma3_upper", gamma[2], -4.0 * rho / 3.0, true, tol),
    ])
}

fn integrate_impl(
    samples: &[(f64, CurvatureTensor)],
    volume: f64,
    sequential: bool,
) -> Result<GlobalInvariants> {
    if !(volume > 0.0) {
        return Err(CurvError::NonpositiveVolume(volume));
    }
    if let Some((w, _)) = samples.iter().find(|(w, _)| !(*w >= 0.0) || !w.is_finite()) {
        return Err(CurvError::BadWeights(format!("negative or non-finite weight {w}")));
    }
    let total: f64 = samples.iter().map(|(w, _)| *w).sum();
    if (total - volume).abs() > 1e-9 * volume.max(1.0) {
        return Err(CurvError::BadWeights(format!(
            "weights sum to {total}, expected the volume {volume}"
        )));
    }
    let eval = |sample: &(f64, CurvatureTensor)| -> [f64; 3] {
        let (w, t) = sample;
        let rep = decompose(t);
        let (e, s) = eq_form_densities(&rep);
        [w * e, w * s, w * rep.scalar_curvature / 4.0]
    };
    let contributions = if sequential {
        par::map_slice_seq(samples, eval)
    } else {
        par::map_slice_chunked(samples, eval)
    };
    let chis: Vec<f64> = contributions.iter().map(|c| c[0]).collect();
    let taus: Vec<f64> = contributions.iter().map(|c| c[1]).collect();
    let rhos: Vec<f64> = contributions.iter().map(|c| c[2]).collect();
    Ok(GlobalInvariants {
        chi: par::pairwise_sum(&chis),
        tau: par::pairwise_sum(&taus),
        volume,
        rho: par::pairwise_sum(&rhos) / volume,
    })
}

/// Quadrature form of the invariant integrals: `chi` and `tau` as weighted
/// sums of densities. Weights must be nonnegative and sum to `volume`.
/// Samples are evaluated on the thread pool when the `parallel` feature is
/// on; the reduction is a fixed-order pairwise sum either way.
pub fn integrate_field(samples: &[(f64, CurvatureTensor)], volume: f64) -> Result<GlobalInvariants> {
    integrate_impl(samples, volume, false)
}

/// Sequential twin of [`integrate_field`].
pub fn integrate_field_seq(
    samples: &[(f64, CurvatureTensor)],
    volume: f64,
) -> Result<GlobalInvariants> {
    integrate_impl(samples, volume, true)
}
