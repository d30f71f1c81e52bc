//! The curvature operator on 2-forms, the Hodge star, and the Weyl
//! decomposition.
//!
//! 2-form bases are ordered as follows. Coordinate basis:
//! `e1^e2, e1^e3, e1^e4, e2^e3, e2^e4, e3^e4`. Self-dual basis:
//! `w1+, w2+, w3+, w1-, w2-, w3-` with
//! `w1± = (e1^e2 ± e3^e4)/sqrt(2)`, `w2± = (e1^e3 ± e4^e2)/sqrt(2)`,
//! `w3± = (e1^e4 ± e2^e3)/sqrt(2)`; both bases are orthonormal.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix3, Matrix6, SymmetricEigen};
use serde::Serialize;

use crate::error::{CurvError, Result};
use crate::spectrum::SingerThorpeSpectrum;
use crate::tensor::CurvatureTensor;

/// Required symmetry of operator matrices.
pub const OPERATOR_SYMMETRY_TOL: f64 = 1e-12;

/// Index pairs of the coordinate 2-form basis (0-based).
pub const BASIS_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Which ordered 2-form basis a matrix is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Coordinate,
    SelfDual,
}

/// Orthogonal change of basis: columns are the self-dual basis 2-forms in
/// coordinate-basis coordinates.
pub fn self_dual_change() -> Matrix6<f64> {
    let q = FRAC_1_SQRT_2;
    Matrix6::new(
        q, 0.0, 0.0, q, 0.0, 0.0, //
        0.0, q, 0.0, 0.0, q, 0.0, //
        0.0, 0.0, q, 0.0, 0.0, q, //
        0.0, 0.0, q, 0.0, 0.0, -q, //
        0.0, -q, 0.0, 0.0, q, 0.0, //
        q, 0.0, 0.0, -q, 0.0, 0.0,
    )
}

/// Hodge star matrix in the given basis.
pub fn hodge_star(basis: Basis) -> Matrix6<f64> {
    match basis {
        Basis::Coordinate => {
            let mut s = Matrix6::zeros();
            s[(5, 0)] = 1.0;
            s[(4, 1)] = -1.0;
            s[(3, 2)] = 1.0;
            s[(2, 3)] = 1.0;
            s[(1, 4)] = -1.0;
            s[(0, 5)] = 1.0;
            s
        }
        Basis::SelfDual => Matrix6::from_diagonal(&nalgebra::Vector6::new(1.0, 1.0, 1.0, -1.0, -1.0, -1.0)),
    }
}

/// Symmetric curvature operator on 2-forms together with its basis tag.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureOperator {
    matrix: Matrix6<f64>,
    basis: Basis,
}

fn ascending3(m: &Matrix3<f64>) -> [f64; 3] {
    let eig = SymmetricEigen::new(*m);
    let mut v = [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2]];
    v.sort_by(f64::total_cmp);
    v
}

impl CurvatureOperator {
    /// `<R(e_i ^ e_j), e_k ^ e_l> = R_{ijkl}` in the coordinate basis,
    /// converted to `basis` if requested.
    pub fn from_tensor(t: &CurvatureTensor, basis: Basis) -> Self {
        let m = Matrix6::from_fn(|a, b| {
            let (i, j) = BASIS_PAIRS[a];
            let (k, l) = BASIS_PAIRS[b];
            t.r(i + 1, j + 1, k + 1, l + 1)
        });
        match basis {
            Basis::Coordinate => CurvatureOperator { matrix: m, basis },
            // expand <R w_a^±, w_b^±> directly; exact halves, no sqrt(2)
            // roundoff from conjugating
            Basis::SelfDual => {
                const COMP: [usize; 3] = [5, 4, 3];
                const SIGMA: [f64; 3] = [1.0, -1.0, 1.0];
                let matrix = Matrix6::from_fn(|r, c| {
                    let (k, sk) = if r < 3 { (r, 1.0) } else { (r - 3, -1.0) };
                    let (l, sl) = if c < 3 { (c, 1.0) } else { (c - 3, -1.0) };
                    0.5 * (m[(k, l)]
                        + sl * SIGMA[l] * m[(k, COMP[l])]
                        + sk * SIGMA[k] * m[(COMP[k], l)]
                        + sk * sl * SIGMA[k] * SIGMA[l] * m[(COMP[k], COMP[l])])
                });
                CurvatureOperator { matrix, basis }
            }
        }
    }

    /// Wraps an explicit matrix, enforcing symmetry.
    pub fn from_matrix(matrix: Matrix6<f64>, basis: Basis) -> Result<Self> {
        let defect = (matrix - matrix.transpose()).abs().max();
        if defect > OPERATOR_SYMMETRY_TOL {
            return Err(CurvError::NotSymmetric(defect));
        }
        Ok(CurvatureOperator { matrix, basis })
    }

    pub fn matrix(&self) -> &Matrix6<f64> {
        &self.matrix
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    /// The same operator expressed in another basis.
    pub fn in_basis(&self, basis: Basis) -> Self {
        if basis == self.basis {
            return self.clone();
        }
        let b = self_dual_change();
        let matrix = match basis {
            Basis::SelfDual => b.transpose() * self.matrix * b,
            Basis::Coordinate => b * self.matrix * b.transpose(),
        };
        CurvatureOperator { matrix, basis }
    }

    /// Scalar curvature; the operator trace over 2-forms is `s/2`.
    pub fn scalar_curvature(&self) -> f64 {
        2.0 * self.matrix.trace()
    }

    /// Einstein constant `rho = s/4` (meaningful when block-diagonal).
    pub fn einstein_constant(&self) -> f64 {
        self.matrix.trace() / 2.0
    }

    /// Frobenius norm of the commutator with the Hodge star. Zero exactly
    /// when the operator preserves the self-dual splitting (Einstein).
    pub fn star_commutator_norm(&self) -> f64 {
        let s = hodge_star(self.basis);
        (self.matrix * s - s * self.matrix).norm()
    }

    /// Self-dual and anti-self-dual 3x3 blocks; errors if the mixed block
    /// is larger than `tol` in Frobenius norm (non-Einstein input).
    pub fn blocks(&self, tol: f64) -> Result<(Matrix3<f64>, Matrix3<f64>)> {
        let sd = self.in_basis(Basis::SelfDual);
        let m = sd.matrix;
        let mixed = m.fixed_view::<3, 3>(0, 3).norm();
        if mixed > tol {
            return Err(CurvError::NotBlockDiagonal { norm: mixed, tol });
        }
        Ok((
            m.fixed_view::<3, 3>(0, 0).into_owned(),
            m.fixed_view::<3, 3>(3, 3).into_owned(),
        ))
    }

    /// Ascending eigenvalues of the two blocks.
    pub fn block_spectra(&self, tol: f64) -> Result<([f64; 3], [f64; 3])> {
        let (p, m) = self.blocks(tol)?;
        Ok((ascending3(&p), ascending3(&m)))
    }

    /// All six eigenvalues, ascending.
    pub fn eigenvalues(&self) -> [f64; 6] {
        let eig = SymmetricEigen::new(self.matrix);
        let mut v = [0.0; 6];
        for i in 0..6 {
            v[i] = eig.eigenvalues[i];
        }
        v.sort_by(f64::total_cmp);
        v
    }

    /// Recovers the Singer-Thorpe spectrum: ascending block spectra paired
    /// index-by-index, `lambda_i = (a+_i + a-_i)/2`, `mu_i = (a+_i - a-_i)/2`.
    /// Inverse of building the operator from a spectrum, up to tolerance.
    pub fn singer_thorpe_spectrum(&self, tol: f64) -> Result<SingerThorpeSpectrum> {
        let (a_plus, a_minus) = self.block_spectra(tol)?;
        SingerThorpeSpectrum::from_block_spectra(a_plus, a_minus)
    }

    /// Relabels the two 2-form bundles (the operator of the reversed
    /// orientation, expressed in the reversed self-dual basis).
    pub fn swap_duality(&self) -> Self {
        let sd = self.in_basis(Basis::SelfDual);
        let m = sd.matrix;
        let swapped = Matrix6::from_fn(|r, c| m[((r + 3) % 6, (c + 3) % 6)]);
        CurvatureOperator { matrix: swapped, basis: Basis::SelfDual }.in_basis(self.basis)
    }
}

/// Eigenvalue triples of the two Weyl halves, each ascending and trace-free,
/// plus the scalar curvature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeylPair {
    pub w_plus: [f64; 3],
    pub w_minus: [f64; 3],
    pub s: f64,
}

/// Irreducible pieces of a curvature tensor: scalar part, traceless Ricci
/// size, and the Weyl eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub scalar_part: f64,
    pub scalar_curvature: f64,
    pub traceless_ricci_norm: f64,
    pub weyl: WeylPair,
}

/// Splits a curvature tensor into scalar, traceless-Ricci and Weyl parts.
/// For Einstein inputs the Weyl eigenvalues are `lambda_i ± mu_i - rho/3`.
pub fn decompose(t: &CurvatureTensor) -> DecompositionReport {
    let op = CurvatureOperator::from_tensor(t, Basis::SelfDual);
    let m = op.matrix;
    let s = op.scalar_curvature();
    let ric = t.ricci();
    let rho_mean = s / 4.0;
    let mut ric0_sq = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            let target = if a == b { rho_mean } else { 0.0 };
            ric0_sq += (ric[(a, b)] - target).powi(2);
        }
    }
    // both diagonal blocks have trace s/4; removing s/12 per axis leaves the
    // trace-free Weyl halves
    let w_plus_block = m.fixed_view::<3, 3>(0, 0).into_owned() - Matrix3::identity() * (s / 12.0);
    let w_minus_block = m.fixed_view::<3, 3>(3, 3).into_owned() - Matrix3::identity() * (s / 12.0);
    DecompositionReport {
        scalar_part: s / 12.0,
        scalar_curvature: s,
        traceless_ricci_norm: ric0_sq.sqrt(),
        weyl: WeylPair {
            w_plus: ascending3(&w_plus_block),
            w_minus: ascending3(&w_minus_block),
            s,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ch2() -> CurvatureTensor {
        let spec = SingerThorpeSpectrum::new([-4.0, -1.0, -1.0], [-2.0, 1.0, 1.0], -6.0).unwrap();
        CurvatureTensor::from_singer_thorpe(&spec)
    }

    fn space_form(k: f64) -> CurvatureTensor {
        let spec = SingerThorpeSpectrum::new([k, k, k], [0.0; 3], 3.0 * k).unwrap();
        CurvatureTensor::from_singer_thorpe(&spec)
    }

    #[test]
    fn change_of_basis_is_orthogonal_and_star_diagonalizes() {
        let b = self_dual_change();
        assert!((b.transpose() * b - Matrix6::identity()).abs().max() < 1e-15);
        let star_c = hodge_star(Basis::Coordinate);
        assert!((star_c * star_c - Matrix6::identity()).abs().max() < 1e-15);
        let star_sd = b.transpose() * star_c * b;
        assert!((star_sd - hodge_star(Basis::SelfDual)).abs().max() < 1e-14);
    }

    #[test]
    fn space_forms_are_scalar_operators_in_either_basis() {
        for k in [-1.0, 1.0] {
            let t = space_form(k);
            for basis in [Basis::Coordinate, Basis::SelfDual] {
                let op = CurvatureOperator::from_tensor(&t, basis);
                assert!((op.matrix() - Matrix6::identity() * k).abs().max() < 1e-14);
            }
        }
    }

    #[test]
    fn direct_self_dual_matrix_equals_conjugated_one() {
        let t = ch2();
        let direct = CurvatureOperator::from_tensor(&t, Basis::SelfDual);
        let conjugated = CurvatureOperator::from_tensor(&t, Basis::Coordinate).in_basis(Basis::SelfDual);
        assert!((direct.matrix() - conjugated.matrix()).abs().max() < 1e-14);
        let back = direct.in_basis(Basis::Coordinate);
        let coord = CurvatureOperator::from_tensor(&t, Basis::Coordinate);
        assert!((back.matrix() - coord.matrix()).abs().max() < 1e-14);
    }

    #[test]
    fn tensor_operator_consistency_slot_by_slot() {
        let t = ch2();
        let op = CurvatureOperator::from_tensor(&t, Basis::Coordinate);
        for (a, &(i, j)) in BASIS_PAIRS.iter().enumerate() {
            for (b, &(k, l)) in BASIS_PAIRS.iter().enumerate() {
                assert_abs_diff_eq!(
                    op.matrix()[(a, b)],
                    t.r(i + 1, j + 1, k + 1, l + 1),
                    epsilon = 1e-15
                );
            }
        }
    }

    #[test]
    fn ch2_block_spectra_and_spectrum_roundtrip() {
        let op = CurvatureOperator::from_tensor(&ch2(), Basis::SelfDual);
        let (ap, am) = op.block_spectra(1e-10).unwrap();
        assert_abs_diff_eq!(ap[0], -6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ap[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ap[2], 0.0, epsilon = 1e-12);
        for v in am {
            assert_abs_diff_eq!(v, -2.0, epsilon = 1e-12);
        }
        let spec = op.singer_thorpe_spectrum(1e-10).unwrap();
        assert_abs_diff_eq!(spec.lambda()[0], -4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(spec.mu()[0], -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(spec.rho(), -6.0, epsilon = 1e-12);
    }

    #[test]
    fn h2xh2_spectrum_from_block_diagonal() {
        let spec = SingerThorpeSpectrum::new([-1.0, 0.0, 0.0], [0.0; 3], -1.0).unwrap();
        let op = CurvatureOperator::from_tensor(
            &CurvatureTensor::from_singer_thorpe(&spec),
            Basis::SelfDual,
        );
        let got = op.singer_thorpe_spectrum(1e-10).unwrap();
        assert_abs_diff_eq!(got.lambda()[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(got.lambda()[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(got.rho(), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn non_einstein_operator_is_not_block_diagonal() {
        let mut entries = vec![(1usize, 2usize, 1usize, 2usize, -0.9f64)];
        for (i, j) in [(1, 3), (1, 4), (2, 3), (2, 4), (3, 4)] {
            entries.push((i, j, i, j, -1.0));
        }
        let t = CurvatureTensor::from_components(&entries).unwrap();
        let op = CurvatureOperator::from_tensor(&t, Basis::Coordinate);
        assert!(matches!(
            op.blocks(1e-9),
            Err(CurvError::NotBlockDiagonal { .. })
        ));
        assert!(op.star_commutator_norm() > 1e-2);
    }

    #[test]
    fn decompose_known_models() {
        let rep = decompose(&ch2());
        assert_abs_diff_eq!(rep.scalar_curvature, -24.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.weyl.w_plus[0], -4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.weyl.w_plus[1], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.weyl.w_plus[2], 2.0, epsilon = 1e-12);
        for v in rep.weyl.w_minus {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
        }
        assert!(rep.traceless_ricci_norm < 1e-12);

        let h4 = decompose(&space_form(-1.0));
        assert_abs_diff_eq!(h4.scalar_curvature, -12.0, epsilon = 1e-12);
        for v in h4.weyl.w_plus.iter().chain(h4.weyl.w_minus.iter()) {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-12);
        }

        let spec = SingerThorpeSpectrum::new([-1.0, 0.0, 0.0], [0.0; 3], -1.0).unwrap();
        let prod = decompose(&CurvatureTensor::from_singer_thorpe(&spec));
        let expect = [-2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0];
        for i in 0..3 {
            assert_abs_diff_eq!(prod.weyl.w_plus[i], expect[i], epsilon = 1e-12);
            assert_abs_diff_eq!(prod.weyl.w_minus[i], expect[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn weyl_triples_sum_to_zero_and_s_is_4rho() {
        let t = ch2();
        let rep = decompose(&t);
        assert_abs_diff_eq!(rep.weyl.w_plus.iter().sum::<f64>(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.weyl.w_minus.iter().sum::<f64>(), 0.0, epsilon = 1e-12);
        let rho = t.einstein_constant(1e-8).unwrap();
        assert_abs_diff_eq!(rep.scalar_curvature, 4.0 * rho, epsilon = 1e-12);
    }

    #[test]
    fn swap_duality_exchanges_block_spectra() {
        let op = CurvatureOperator::from_tensor(&ch2(), Basis::SelfDual);
        let swapped = op.swap_duality();
        let (ap, am) = op.block_spectra(1e-10).unwrap();
        let (bp, bm) = swapped.block_spectra(1e-10).unwrap();
        for i in 0..3 {
            assert_abs_diff_eq!(ap[i], bm[i], epsilon = 1e-13);
            assert_abs_diff_eq!(am[i], bp[i], epsilon = 1e-13);
        }
    }
}
