//! Curvature conditions: complex sectional curvature, isotropic planes, and
//! the eigenvalue margins that decide them.
//!
//! Nonpositive isotropic curvature (NIC) is checked three equivalent ways:
//! the isotropic-plane margin `-(1/2) min(alpha_1^+, alpha_1^-)`, the
//! nonpositivity of `P^± = (s/6) I - W^±`, and direct sampling of
//! `K(pi)` over random frames. The margins are exposed so callers can see
//! how far a condition is from holding, not just a verdict.

use nalgebra::{Complex, Matrix3, Matrix4, SymmetricEigen, Vector3, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CurvError, Result};
use crate::operator::{self_dual_change, CurvatureOperator, BASIS_PAIRS};
use crate::par;
use crate::spectrum::SingerThorpeSpectrum;
use crate::tensor::CurvatureTensor;

/// Default tolerance for condition verdicts.
pub const CONDITION_TOL: f64 = 1e-9;
/// Required orthonormality of isotropic-plane frames.
pub const FRAME_TOL: f64 = 1e-12;

type C64 = Complex<f64>;

/// The two families of isotropic 2-planes in complexified tangent space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IsotropicFamily {
    /// Plane `span{f1 + i f2, f3 + i f4}`; its wedge lies in `Lambda^+ (x) C`.
    SelfDual,
    /// Plane `span{f1 + i f2, f3 - i f4}`; its wedge lies in `Lambda^- (x) C`.
    AntiSelfDual,
}

impl IsotropicFamily {
    pub fn sign(self) -> f64 {
        match self {
            IsotropicFamily::SelfDual => 1.0,
            IsotropicFamily::AntiSelfDual => -1.0,
        }
    }

    pub const BOTH: [IsotropicFamily; 2] = [IsotropicFamily::SelfDual, IsotropicFamily::AntiSelfDual];
}

/// A totally isotropic 2-plane, encoded by an orthonormal frame `f1..f4`
/// and the family pairing the frame into complex vectors.
#[derive(Clone, Debug)]
pub struct IsotropicPlane {
    frame: Matrix4<f64>,
    family: IsotropicFamily,
}

impl IsotropicPlane {
    /// `frame` columns must be orthonormal to [`FRAME_TOL`].
    pub fn new(frame: Matrix4<f64>, family: IsotropicFamily) -> Result<Self> {
        let defect = (frame.transpose() * frame - Matrix4::identity()).abs().max();
        if defect > FRAME_TOL {
            return Err(CurvError::NotOrthonormal(defect));
        }
        Ok(IsotropicPlane { frame, family })
    }

    pub fn frame(&self) -> &Matrix4<f64> {
        &self.frame
    }

    pub fn family(&self) -> IsotropicFamily {
        self.family
    }

    /// `u = (f1 + i f2)/sqrt(2)`.
    pub fn u(&self) -> Vector4<C64> {
        let f1 = self.frame.column(0);
        let f2 = self.frame.column(1);
        Vector4::from_fn(|i, _| C64::new(f1[i], f2[i]) * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0))
    }

    /// `v = (f3 ± i f4)/sqrt(2)` depending on the family.
    pub fn v(&self) -> Vector4<C64> {
        let s = self.family.sign();
        let f3 = self.frame.column(2);
        let f4 = self.frame.column(3);
        Vector4::from_fn(|i, _| C64::new(f3[i], s * f4[i]) * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0))
    }

    /// Largest bilinear product `|(u,u)|, |(v,v)|, |(u,v)|`; zero means the
    /// complex span really is totally isotropic.
    pub fn isotropy_defect(&self) -> f64 {
        let u = self.u();
        let v = self.v();
        let bil = |a: &Vector4<C64>, b: &Vector4<C64>| -> f64 {
            (0..4).map(|i| a[i] * b[i]).sum::<C64>().norm()
        };
        bil(&u, &u).max(bil(&v, &v)).max(bil(&u, &v))
    }
}

fn wedge(u: &Vector4<C64>, v: &Vector4<C64>) -> [C64; 6] {
    let mut phi = [C64::new(0.0, 0.0); 6];
    for (a, &(i, j)) in BASIS_PAIRS.iter().enumerate() {
        phi[a] = u[i] * v[j] - u[j] * v[i];
    }
    phi
}

/// Hermitian curvature form on a complex 2-plane: `K(pi)` for the plane
/// spanned by `{u, v}`, evaluated on the unitary basis obtained by
/// Gram-Schmidt. Invariant under unitary changes of basis of the span; for
/// real orthonormal `u, v` it reduces to the sectional curvature.
pub fn complex_sectional(t: &CurvatureTensor, u: &Vector4<C64>, v: &Vector4<C64>) -> Result<f64> {
    let herm = |a: &Vector4<C64>, b: &Vector4<C64>| -> C64 {
        (0..4).map(|i| a[i] * b[i].conj()).sum::<C64>()
    };
    let nu2 = herm(u, u).re;
    if nu2 < 1e-28 {
        return Err(CurvError::DegenerateSpan);
    }
    let nu = u / C64::new(nu2.sqrt(), 0.0);
    let proj = herm(v, &nu);
    let w = v - nu * proj;
    let nw2 = herm(&w, &w).re;
    if nw2.sqrt() < 1e-12 * herm(v, v).re.sqrt().max(1.0) {
        return Err(CurvError::DegenerateSpan);
    }
    let nv = w / C64::new(nw2.sqrt(), 0.0);
    Ok(hermitian_form(t, &wedge(&nu, &nv)))
}

fn hermitian_form(t: &CurvatureTensor, phi: &[C64; 6]) -> f64 {
    let mut acc = C64::new(0.0, 0.0);
    for (a, &(i, j)) in BASIS_PAIRS.iter().enumerate() {
        for (b, &(k, l)) in BASIS_PAIRS.iter().enumerate() {
            let m = t.r(i + 1, j + 1, k + 1, l + 1);
            acc += phi[a].conj() * phi[b] * C64::new(m, 0.0);
        }
    }
    acc.re
}

/// Isotropic curvature `K(pi)` of the plane. The classical frame sum
/// `R_1313 + R_1414 + R_2323 + R_2424 ± 2 R_1234` equals `4 K(pi)`; see
/// [`raw_isotropic_sum`].
pub fn isotropic_curvature(t: &CurvatureTensor, p: &IsotropicPlane) -> f64 {
    hermitian_form(t, &wedge(&p.u(), &p.v()))
}

/// The un-normalized 4-term frame sum, `4 K(pi)`. Same sign verdict as
/// [`isotropic_curvature`].
pub fn raw_isotropic_sum(t: &CurvatureTensor, p: &IsotropicPlane) -> f64 {
    4.0 * isotropic_curvature(t, p)
}

/// Largest isotropic curvature over both families:
/// `(1/2) max(a2+ + a3+, a2- + a3-)` in ascending block eigenvalues, which
/// equals `-(1/2) min(alpha_1^+, alpha_1^-)`. NIC holds iff this is <= 0.
pub fn nic_margin(op: &CurvatureOperator, tol: f64) -> Result<f64> {
    let (ap, am) = op.block_spectra(tol)?;
    Ok(0.5 * (ap[1] + ap[2]).max(am[1] + am[2]))
}

/// Smallest isotropic curvature over both families; nonnegative isotropic
/// curvature holds iff this is >= 0.
pub fn min_isotropic(op: &CurvatureOperator, tol: f64) -> Result<f64> {
    let (ap, am) = op.block_spectra(tol)?;
    Ok(0.5 * (ap[0] + ap[1]).min(am[0] + am[1]))
}

/// Largest eigenvalue of the full operator on 2-forms; the curvature
/// operator is nonpositive iff this is <= 0.
pub fn npco_margin(op: &CurvatureOperator) -> f64 {
    op.eigenvalues()[5]
}

/// `alpha_i^± = lambda_i ± mu_i - rho`, both triples non-decreasing with
/// `sum_i alpha_i^± = -2 rho`.
pub fn alpha(spec: &SingerThorpeSpectrum) -> ([f64; 3], [f64; 3]) {
    let rho = spec.rho();
    (spec.a_plus().map(|a| a - rho), spec.a_minus().map(|a| a - rho))
}

/// A decomposable unit 2-form attaining a sectional-curvature endpoint,
/// with the plane it spans.
#[derive(Clone, Debug)]
pub struct SectionalWitness {
    /// Coefficients in the coordinate 2-form basis.
    pub two_form: [f64; 6],
    /// Orthonormal vectors spanning the plane of the 2-form.
    pub plane: (Vector4<f64>, Vector4<f64>),
}

/// Range of sectional curvature over all 2-planes, with attaining planes.
#[derive(Clone, Debug)]
pub struct SectionalRange {
    pub min: f64,
    pub max: f64,
    pub min_witness: SectionalWitness,
    pub max_witness: SectionalWitness,
}

fn eigenpair(block: &Matrix3<f64>, largest: bool) -> (f64, Vector3<f64>) {
    let eig = SymmetricEigen::new(*block);
    let mut idx = 0;
    for i in 1..3 {
        let better = if largest {
            eig.eigenvalues[i] > eig.eigenvalues[idx]
        } else {
            eig.eigenvalues[i] < eig.eigenvalues[idx]
        };
        if better {
            idx = i;
        }
    }
    (eig.eigenvalues[idx], eig.eigenvectors.column(idx).into_owned())
}

fn witness_from_block_vectors(vp: &Vector3<f64>, vm: &Vector3<f64>) -> SectionalWitness {
    // unit decomposable 2-forms are exactly those with |w+| = |w-| = 1/sqrt(2)
    let q = std::f64::consts::FRAC_1_SQRT_2;
    let sd = nalgebra::Vector6::new(q * vp[0], q * vp[1], q * vp[2], q * vm[0], q * vm[1], q * vm[2]);
    let coord = self_dual_change() * sd;
    let mut omega = Matrix4::<f64>::zeros();
    for (a, &(i, j)) in BASIS_PAIRS.iter().enumerate() {
        omega[(i, j)] = coord[a];
        omega[(j, i)] = -coord[a];
    }
    // the image of a rank-2 antisymmetric matrix is the plane of the form
    let mut best: Option<Vector4<f64>> = None;
    for z in 0..4 {
        let img = omega.column(z).into_owned();
        if best.as_ref().is_none_or(|b| img.norm() > b.norm()) {
            best = Some(img);
        }
    }
    let p = best.unwrap().normalize();
    let mut q2: Option<Vector4<f64>> = None;
    for z in 0..4 {
        let img = omega.column(z).into_owned();
        let perp = img - p * p.dot(&img);
        if q2.as_ref().is_none_or(|b| perp.norm() > b.norm()) {
            q2 = Some(perp);
        }
    }
    let qv = q2.unwrap().normalize();
    SectionalWitness {
        two_form: [coord[0], coord[1], coord[2], coord[3], coord[4], coord[5]],
        plane: (p, qv),
    }
}

/// Sectional-curvature range of an Einstein operator:
/// `[(a1+ + a1-)/2, (a3+ + a3-)/2]` over unit decomposable 2-forms.
pub fn sectional_range(op: &CurvatureOperator, tol: f64) -> Result<SectionalRange> {
    let (bp, bm) = op.blocks(tol)?;
    let (lo_p, v_lo_p) = eigenpair(&bp, false);
    let (lo_m, v_lo_m) = eigenpair(&bm, false);
    let (hi_p, v_hi_p) = eigenpair(&bp, true);
    let (hi_m, v_hi_m) = eigenpair(&bm, true);
    Ok(SectionalRange {
        min: 0.5 * (lo_p + lo_m),
        max: 0.5 * (hi_p + hi_m),
        min_witness: witness_from_block_vectors(&v_lo_p, &v_lo_m),
        max_witness: witness_from_block_vectors(&v_hi_p, &v_hi_m),
    })
}

/// Condition verdicts with their margins. All margins are exact functions
/// of the block spectra; flags compare them against `tol`.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub rho: f64,
    /// max isotropic curvature over both families; NIC iff <= tol
    pub nic_margin: f64,
    /// min isotropic curvature over both families; NNIC iff >= -tol
    pub nnic_margin: f64,
    /// largest curvature-operator eigenvalue; NPCO iff <= tol
    pub npco_margin: f64,
    pub sectional_min: f64,
    pub sectional_max: f64,
    /// ascending eigenvalues of `(s/6) I - W^+` (equal to `-alpha^+`, reordered)
    pub p_plus: [f64; 3],
    /// ascending eigenvalues of `(s/6) I - W^-`
    pub p_minus: [f64; 3],
    pub nic: bool,
    pub nnic: bool,
    pub npco: bool,
    /// sup K <= rho/6
    pub supk: bool,
    pub tol: f64,
}

/// Evaluates every condition of an Einstein operator at once.
pub fn condition_report(op: &CurvatureOperator, tol: f64) -> Result<ConditionReport> {
    let (ap, am) = op.block_spectra(tol)?;
    let rho = op.einstein_constant();
    let mut p_plus = ap.map(|a| rho - a);
    let mut p_minus = am.map(|a| rho - a);
    p_plus.sort_by(f64::total_cmp);
    p_minus.sort_by(f64::total_cmp);
    let nic_margin = 0.5 * (ap[1] + ap[2]).max(am[1] + am[2]);
    let nnic_margin = 0.5 * (ap[0] + ap[1]).min(am[0] + am[1]);
    let npco_margin = npco_margin(op);
    let sectional_min = 0.5 * (ap[0] + am[0]);
    let sectional_max = 0.5 * (ap[2] + am[2]);
    Ok(ConditionReport {
        rho,
        nic_margin,
        nnic_margin,
        npco_margin,
        sectional_min,
        sectional_max,
        p_plus,
        p_minus,
        nic: nic_margin <= tol,
        nnic: nnic_margin >= -tol,
        npco: npco_margin <= tol,
        supk: sectional_max <= rho / 6.0 + tol,
        tol,
    })
}

/// Best isotropic curvature found per family by random frame sampling.
#[derive(Clone, Debug)]
pub struct IsotropicScan {
    pub best_self_dual: (f64, IsotropicPlane),
    pub best_anti_self_dual: (f64, IsotropicPlane),
}

impl IsotropicScan {
    pub fn max(&self) -> f64 {
        self.best_self_dual.0.max(self.best_anti_self_dual.0)
    }
}

fn rotation_in_plane(p: usize, q: usize, theta: f64) -> Matrix4<f64> {
    let mut g = Matrix4::identity();
    let (c, s) = (theta.cos(), theta.sin());
    g[(p, p)] = c;
    g[(q, q)] = c;
    g[(p, q)] = -s;
    g[(q, p)] = s;
    g
}

fn random_frame(rng: &mut ChaCha8Rng) -> Matrix4<f64> {
    // Box-Muller normals, then QR with positive-diagonal R and det +1
    let mut normals = [0.0f64; 16];
    for pair in normals.chunks_mut(2) {
        let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.random_range(0.0..1.0);
        let r = (-2.0 * u1.ln()).sqrt();
        pair[0] = r * (std::f64::consts::TAU * u2).cos();
        if pair.len() > 1 {
            pair[1] = r * (std::f64::consts::TAU * u2).sin();
        }
    }
    let g = Matrix4::from_fn(|i, j| normals[4 * i + j]);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for i in 0..4 {
        if r[(i, i)] < 0.0 {
            for row in 0..4 {
                q[(row, i)] = -q[(row, i)];
            }
        }
    }
    if q.determinant() < 0.0 {
        for row in 0..4 {
            q[(row, 3)] = -q[(row, 3)];
        }
    }
    q
}

// one independent, index-derived stream per sample keeps results identical
// between the parallel and sequential paths
pub(crate) fn derive_stream(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (index + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn scan_impl(t: &CurvatureTensor, n: usize, seed: u64, sequential: bool) -> IsotropicScan {
    let indices: Vec<u64> = (0..n as u64).collect();
    let eval = |i: &u64| -> (Matrix4<f64>, f64, f64) {
        let frame = random_frame(&mut derive_stream(seed, *i));
        let sd = IsotropicPlane { frame, family: IsotropicFamily::SelfDual };
        let asd = IsotropicPlane { frame, family: IsotropicFamily::AntiSelfDual };
        (frame, isotropic_curvature(t, &sd), isotropic_curvature(t, &asd))
    };
    let values = if sequential {
        par::map_slice_seq(&indices, eval)
    } else {
        par::map_slice_chunked(&indices, eval)
    };
    let mut best_sd = (f64::NEG_INFINITY, 0usize);
    let mut best_asd = (f64::NEG_INFINITY, 0usize);
    for (i, &(_, vs, va)) in values.iter().enumerate() {
        if vs > best_sd.0 {
            best_sd = (vs, i);
        }
        if va > best_asd.0 {
            best_asd = (va, i);
        }
    }
    IsotropicScan {
        best_self_dual: (
            best_sd.0,
            IsotropicPlane { frame: values[best_sd.1].0, family: IsotropicFamily::SelfDual },
        ),
        best_anti_self_dual: (
            best_asd.0,
            IsotropicPlane { frame: values[best_asd.1].0, family: IsotropicFamily::AntiSelfDual },
        ),
    }
}

/// Samples `n` random orthonormal frames (deterministic in `seed`) and
/// returns the best isotropic curvature seen in each family. Runs on the
/// thread pool when the `parallel` feature is enabled.
pub fn sample_isotropic_max(t: &CurvatureTensor, n: usize, seed: u64) -> IsotropicScan {
    scan_impl(t, n, seed, false)
}

/// Sequential twin of [`sample_isotropic_max`]; same result for same seed.
pub fn sample_isotropic_max_seq(t: &CurvatureTensor, n: usize, seed: u64) -> IsotropicScan {
    scan_impl(t, n, seed, true)
}

/// Deterministic hill climb over the frame, staying within the plane's
/// family. Returns the improved plane and its curvature.
pub fn polish_isotropic_max(t: &CurvatureTensor, plane: &IsotropicPlane) -> (f64, IsotropicPlane) {
    let mut frame = plane.frame;
    let family = plane.family;
    let mut best = isotropic_curvature(t, &IsotropicPlane { frame, family });
    let mut step = 0.25f64;
    while step > 1e-6 {
        let mut improved = true;
        while improved {
            improved = false;
            for &(p, q) in BASIS_PAIRS.iter() {
                for sign in [1.0, -1.0] {
                    let cand = frame * rotation_in_plane(p, q, sign * step);
                    let v = isotropic_curvature(t, &IsotropicPlane { frame: cand, family });
                    if v > best + 1e-15 {
                        best = v;
                        frame = cand;
                        improved = true;
                    }
                }
            }
        }
        step *= 0.35;
    }
    (best, IsotropicPlane { frame, family })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Basis;
    use approx::assert_abs_diff_eq;

    fn tensor(lambda: [f64; 3], mu: [f64; 3]) -> CurvatureTensor {
        let spec = SingerThorpeSpectrum::from_lambda_mu(lambda, mu).unwrap();
        CurvatureTensor::from_singer_thorpe(&spec)
    }

    fn op(t: &CurvatureTensor) -> CurvatureOperator {
        CurvatureOperator::from_tensor(t, Basis::SelfDual)
    }

    fn cvec(re: [f64; 4], im: [f64; 4]) -> Vector4<C64> {
        Vector4::from_fn(|i, _| C64::new(re[i], im[i]))
    }

    #[test]
    fn real_plane_reduces_to_sectional() {
        let t = tensor([-4.0, -1.0, -1.0], [-2.0, 1.0, 1.0]);
        let u = cvec([1.0, 0.0, 0.0, 0.0], [0.0; 4]);
        let v = cvec([0.0, 1.0, 0.0, 0.0], [0.0; 4]);
        assert_abs_diff_eq!(complex_sectional(&t, &u, &v).unwrap(), t.r(1, 2, 1, 2), epsilon = 1e-14);
    }

    #[test]
    fn hyperbolic_isotropic_plane_is_minus_one() {
        let t = tensor([-1.0, -1.0, -1.0], [0.0; 3]);
        let q = std::f64::consts::FRAC_1_SQRT_2;
        let u = cvec([q, 0.0, 0.0, 0.0], [0.0, q, 0.0, 0.0]);
        let v = cvec([0.0, 0.0, q, 0.0], [0.0, 0.0, 0.0, q]);
        assert_abs_diff_eq!(complex_sectional(&t, &u, &v).unwrap(), -1.0, epsilon = 1e-14);
        let p = IsotropicPlane::new(Matrix4::identity(), IsotropicFamily::SelfDual).unwrap();
        assert_abs_diff_eq!(isotropic_curvature(&t, &p), -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(raw_isotropic_sum(&t, &p), -4.0, epsilon = 1e-14);
        assert!(p.isotropy_defect() < 1e-15);
    }

    #[test]
    fn flat_and_sphere_isotropic_values() {
        let flat = tensor([0.0; 3], [0.0; 3]);
        let p = IsotropicPlane::new(Matrix4::identity(), IsotropicFamily::AntiSelfDual).unwrap();
        assert_abs_diff_eq!(isotropic_curvature(&flat, &p), 0.0, epsilon = 1e-15);
        let s4 = tensor([1.0, 1.0, 1.0], [0.0; 3]);
        assert_abs_diff_eq!(isotropic_curvature(&s4, &p), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn degenerate_span_rejected() {
        let t = tensor([-1.0, -1.0, -1.0], [0.0; 3]);
        let u = cvec([1.0, 0.0, 0.0, 0.0], [0.0; 4]);
        let v = cvec([2.0, 0.0, 0.0, 0.0], [0.0; 4]);
        assert!(matches!(complex_sectional(&t, &u, &v), Err(CurvError::DegenerateSpan)));
    }

    #[test]
    fn ch2_kaehler_aligned_plane_hits_the_nic_boundary() {
        let t = tensor([-4.0, -1.0, -1.0], [-2.0, 1.0, 1.0]);
        // standard frame, self-dual family: the wedge lies in span{w2+, w3+},
        // orthogonal to the Kaehler direction w1+
        let p = IsotropicPlane::new(Matrix4::identity(), IsotropicFamily::SelfDual).unwrap();
        assert_abs_diff_eq!(isotropic_curvature(&t, &p), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn margins_for_model_spectra() {
        let h4 = op(&tensor([-1.0, -1.0, -1.0], [0.0; 3]));
        assert_abs_diff_eq!(nic_margin(&h4, 1e-9).unwrap(), -1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(npco_margin(&h4), -1.0, epsilon = 1e-13);

        let ch2 = op(&tensor([-4.0, -1.0, -1.0], [-2.0, 1.0, 1.0]));
        assert_abs_diff_eq!(nic_margin(&ch2, 1e-9).unwrap(), 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(npco_margin(&ch2), 0.0, epsilon = 1e-13);

        let s4 = op(&tensor([1.0, 1.0, 1.0], [0.0; 3]));
        assert_abs_diff_eq!(nic_margin(&s4, 1e-9).unwrap(), 1.0, epsilon = 1e-13);

        let h2xh2 = op(&tensor([-1.0, 0.0, 0.0], [0.0; 3]));
        assert_abs_diff_eq!(npco_margin(&h2xh2), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn alpha_triples() {
        let ch2 = SingerThorpeSpectrum::new([-4.0, -1.0, -1.0], [-2.0, 1.0, 1.0], -6.0).unwrap();
        let (ap, am) = alpha(&ch2);
        assert_eq!(ap, [0.0, 6.0, 6.0]);
        assert_eq!(am, [4.0, 4.0, 4.0]);
        assert_abs_diff_eq!(ap.iter().sum::<f64>(), 12.0, epsilon = 1e-13);

        let h4 = SingerThorpeSpectrum::new([-1.0, -1.0, -1.0], [0.0; 3], -3.0).unwrap();
        let (ap, am) = alpha(&h4);
        assert_eq!(ap, [2.0, 2.0, 2.0]);
        assert_eq!(am, [2.0, 2.0, 2.0]);

        // scalar-flat case: alpha reduces to the block eigenvalues
        let flat = SingerThorpeSpectrum::new([-1.0, 0.0, 1.0], [0.0; 3], 0.0).unwrap();
        let (ap, am) = alpha(&flat);
        assert_eq!(ap, flat.a_plus());
        assert_eq!(am, flat.a_minus());
    }

    #[test]
    fn sectional_ranges_and_witnesses() {
        let cases: [([f64; 3], [f64; 3], f64, f64); 3] = [
            ([-4.0, -1.0, -1.0], [-2.0, 1.0, 1.0], -4.0, -1.0),
            ([-1.0, -1.0, -1.0], [0.0; 3], -1.0, -1.0),
            ([-1.0, 0.0, 0.0], [0.0; 3], -1.0, 0.0),
        ];
        for (lambda, mu, lo, hi) in cases {
            let t = tensor(lambda, mu);
            let r = sectional_range(&op(&t), 1e-9).unwrap();
            assert_abs_diff_eq!(r.min, lo, epsilon = 1e-12);
            assert_abs_diff_eq!(r.max, hi, epsilon = 1e-12);
            // witnesses attain the endpoints as honest plane curvatures
            let (p, q) = (&r.min_witness.plane.0, &r.min_witness.plane.1);
            let mut k = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    for a in 0..4 {
                        for b in 0..4 {
                            k += t.r(i + 1, j + 1, a + 1, b + 1) * p[i] * q[j] * p[a] * q[b];
                        }
                    }
                }
            }
            assert_abs_diff_eq!(k, lo, epsilon = 1e-9);
        }
    }

    #[test]
    fn report_flags_and_p_criterion_agree() {
        let ch2 = op(&tensor([-4.0, -1.0, -1.0], [-2.0, 1.0, 1.0]));
        let rep = condition_report(&ch2, 1e-9).unwrap();
        assert!(rep.nic && rep.npco && rep.supk);
        assert!(!rep.nnic);
        let max_p = rep.p_plus[2].max(rep.p_minus[2]);
        assert!((max_p <= rep.tol) == rep.nic);
        assert_abs_diff_eq!(max_p, 2.0 * rep.nic_margin, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.sectional_max, rep.rho / 6.0, epsilon = 1e-12);
    }

    #[test]
    fn definite_half_operator_forces_definite_p() {
        // if (s/12) I + W^+ (the self-dual block) is negative definite,
        // so is P^+ = (s/6) I - W^+: each P-eigenvalue is the sum of the
        // other two block eigenvalues
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        let mut seen = 0;
        for _ in 0..2000 {
            let lambda = [0; 3].map(|_| rng.random_range(-2.0..0.5));
            let raw = [0; 3].map(|_| rng.random_range(-1.0..1.0f64));
            let mean: f64 = raw.iter().sum::<f64>() / 3.0;
            let spec =
                SingerThorpeSpectrum::from_lambda_mu(lambda, raw.map(|m| m - mean)).unwrap();
            let a_plus = spec.a_plus();
            if a_plus[2] < 0.0 {
                seen += 1;
                let rho = spec.rho();
                let p_max = a_plus.iter().map(|a| rho - a).fold(f64::MIN, f64::max);
                assert!(p_max < 0.0, "block {a_plus:?} definite but P+ max {p_max} >= 0");
            }
        }
        assert!(seen > 100, "not enough definite samples ({seen})");
    }

    #[test]
    fn sampled_max_stays_below_margin_and_polish_closes_in() {
        let t = tensor([-4.0, -1.0, -1.0], [-2.0, 1.0, 1.0]);
        let o = op(&t);
        let margin = nic_margin(&o, 1e-9).unwrap();
        let scan = sample_isotropic_max(&t, 400, 42);
        assert!(scan.max() <= margin + 1e-7);
        let (polished, _) = polish_isotropic_max(&t, &scan.best_self_dual.1);
        let (polished2, _) = polish_isotropic_max(&t, &scan.best_anti_self_dual.1);
        assert!(polished.max(polished2) <= margin + 1e-7);
        assert!(polished.max(polished2) >= margin - 1e-3);
    }

    #[test]
    fn sequential_scan_matches_parallel_scan() {
        let t = tensor([-1.0, 0.0, 0.0], [0.0; 3]);
        let a = sample_isotropic_max(&t, 200, 7);
        let b = sample_isotropic_max_seq(&t, 200, 7);
        assert_eq!(a.best_self_dual.0, b.best_self_dual.0);
        assert_eq!(a.best_anti_self_dual.0, b.best_anti_self_dual.0);
    }
}
