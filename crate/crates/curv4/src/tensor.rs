//! Algebraic curvature tensors of 4-manifolds in an orthonormal frame.
//!
//! Sign convention: `R_{ijij}` is the sectional curvature of the plane
//! spanned by `e_i, e_j`, so the round sphere has `R_{ijij} = +1` and the
//! Einstein constant of the hyperbolic regime is negative.

use nalgebra::Matrix4;

use crate::error::{CurvError, Result};
use crate::spectrum::SingerThorpeSpectrum;

/// Absolute tolerance for detecting conflicting component entries.
pub const COMPONENT_CONFLICT_TOL: f64 = 1e-12;
/// Maximum allowed first-Bianchi residual at construction.
pub const BIANCHI_TOL: f64 = 1e-9;
/// Default tolerance on `max |Ric - rho*Id|` for Einstein checks.
pub const EINSTEIN_TOL: f64 = 1e-8;

/// Curvature tensor `R_{ijkl}` of a 4-manifold at a point, stored densely
/// with all index symmetries enforced at construction:
///
/// * antisymmetry `R_{ijkl} = -R_{jikl} = -R_{ijlk}`,
/// * pair symmetry `R_{ijkl} = R_{klij}`,
/// * first Bianchi identity `R_{ijkl} + R_{iklj} + R_{iljk} = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor {
    r: [[[[f64; 4]; 4]; 4]; 4],
}

/// The eight slots forced by antisymmetry and pair symmetry, with signs.
fn symmetry_orbit(i: usize, j: usize, k: usize, l: usize) -> [(usize, usize, usize, usize, f64); 8] {
    [
        (i, j, k, l, 1.0),
        (j, i, k, l, -1.0),
        (i, j, l, k, -1.0),
        (j, i, l, k, 1.0),
        (k, l, i, j, 1.0),
        (l, k, i, j, -1.0),
        (k, l, j, i, -1.0),
        (l, k, j, i, 1.0),
    ]
}

impl CurvatureTensor {
    /// Builds a tensor from 1-based component entries `(i, j, k, l, value)`.
    /// Every symmetry-related slot is filled; unspecified slots are zero.
    pub fn from_components(entries: &[(usize, usize, usize, usize, f64)]) -> Result<Self> {
        let mut r = [[[[0.0f64; 4]; 4]; 4]; 4];
        let mut set = [[[[false; 4]; 4]; 4]; 4];

        for &(i, j, k, l, v) in entries {
            if !(1..=4).contains(&i) || !(1..=4).contains(&j) || !(1..=4).contains(&k) || !(1..=4).contains(&l) {
                return Err(CurvError::InvalidIndex(i, j, k, l));
            }
            if !v.is_finite() {
                return Err(CurvError::NonFiniteValue { i, j, k, l });
            }
            let (i, j, k, l) = (i - 1, j - 1, k - 1, l - 1);
            if (i == j || k == l) && v.abs() > COMPONENT_CONFLICT_TOL {
                // antisymmetry forces these slots to vanish
                return Err(CurvError::ConflictingEntry {
                    i: i + 1,
                    j: j + 1,
                    k: k + 1,
                    l: l + 1,
                    first: 0.0,
                    second: v,
                });
            }
            if i == j || k == l {
                continue;
            }
            for (a, b, c, d, sign) in symmetry_orbit(i, j, k, l) {
                let w = sign * v;
                if set[a][b][c][d] {
                    if (r[a][b][c][d] - w).abs() > COMPONENT_CONFLICT_TOL {
                        return Err(CurvError::ConflictingEntry {
                            i: a + 1,
                            j: b + 1,
                            k: c + 1,
                            l: d + 1,
                            first: r[a][b][c][d],
                            second: w,
                        });
                    }
                } else {
                    r[a][b][c][d] = w;
                    set[a][b][c][d] = true;
                }
            }
        }

        let t = CurvatureTensor { r };
        let residual = t.bianchi_residual();
        if residual > BIANCHI_TOL {
            return Err(CurvError::BianchiViolation { residual });
        }
        Ok(t)
    }

    /// Builds the Einstein normal-form tensor of a Singer-Thorpe spectrum:
    /// `R_{1212} = R_{3434} = lambda_1`, `R_{1313} = R_{2424} = lambda_2`,
    /// `R_{1414} = R_{2323} = lambda_3`, `R_{1234} = mu_1`,
    /// `R_{1324} = -mu_2`, `R_{1423} = mu_3`, everything else zero.
    pub fn from_singer_thorpe(spec: &SingerThorpeSpectrum) -> Self {
        let l = spec.lambda();
        let m = spec.mu();
        let entries = [
            (1, 2, 1, 2, l[0]),
            (3, 4, 3, 4, l[0]),
            (1, 3, 1, 3, l[1]),
            (2, 4, 2, 4, l[1]),
            (1, 4, 1, 4, l[2]),
            (2, 3, 2, 3, l[2]),
            (1, 2, 3, 4, m[0]),
            (1, 3, 2, 4, -m[1]),
            (1, 4, 2, 3, m[2]),
        ];
        // mu_1 + mu_2 + mu_3 = 0 is exactly the first Bianchi identity here,
        // and the spectrum type guarantees it.
        Self::from_components(&entries).expect("normal form satisfies all symmetries")
    }

    /// Component `R_{ijkl}` with 1-based indices.
    pub fn r(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.r[i - 1][j - 1][k - 1][l - 1]
    }

    /// The induced operator on 2-forms in the requested basis.
    pub fn to_operator(&self, basis: crate::operator::Basis) -> crate::operator::CurvatureOperator {
        crate::operator::CurvatureOperator::from_tensor(self, basis)
    }

    /// Sectional curvature of the coordinate plane `e_i ^ e_j` (1-based).
    pub fn sectional(&self, i: usize, j: usize) -> f64 {
        self.r(i, j, i, j)
    }

    /// Maximum violation of antisymmetry and pair symmetry over all slots.
    pub fn symmetry_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let v = self.r[i][j][k][l];
                        worst = worst.max((v + self.r[j][i][k][l]).abs());
                        worst = worst.max((v + self.r[i][j][l][k]).abs());
                        worst = worst.max((v - self.r[k][l][i][j]).abs());
                    }
                }
            }
        }
        worst
    }

    /// Maximum first-Bianchi residual `|R_{ijkl} + R_{iklj} + R_{iljk}|`.
    pub fn bianchi_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let s = self.r[i][j][k][l] + self.r[i][k][l][j] + self.r[i][l][j][k];
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// Ricci tensor `Ric_{jl} = sum_i R_{ijil}`.
    pub fn ricci(&self) -> Matrix4<f64> {
        Matrix4::from_fn(|j, l| (0..4).map(|i| self.r[i][j][i][l]).sum())
    }

    /// Scalar curvature `s = tr Ric`.
    pub fn scalar_curvature(&self) -> f64 {
        self.ricci().trace()
    }

    /// Einstein constant `rho = s/4`, checked against `max |Ric - rho*Id| <= tol`.
    pub fn einstein_constant(&self, tol: f64) -> Result<f64> {
        let ric = self.ricci();
        let rho = ric.trace() / 4.0;
        let deviation = self.einstein_defect(&ric, rho);
        if deviation > tol {
            return Err(CurvError::NotEinstein { deviation, tol });
        }
        Ok(rho)
    }

    /// `max |Ric - rho*Id|` without failing.
    pub fn einstein_deviation(&self) -> f64 {
        let ric = self.ricci();
        let rho = ric.trace() / 4.0;
        self.einstein_defect(&ric, rho)
    }

    fn einstein_defect(&self, ric: &Matrix4<f64>, rho: f64) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..4 {
            for l in 0..4 {
                let target = if j == l { rho } else { 0.0 };
                worst = worst.max((ric[(j, l)] - target).abs());
            }
        }
        worst
    }

    /// Pulls the tensor back along the frame change `f_a = sum_i O_{ia} e_i`
    /// (columns of `o` are the new frame vectors).
    pub fn rotate(&self, o: &Matrix4<f64>) -> Self {
        let mut r = [[[[0.0f64; 4]; 4]; 4]; 4];
        // contract one index at a time to keep this O(4^5)
        let mut t1 = [[[[0.0f64; 4]; 4]; 4]; 4];
        for a in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        t1[a][j][k][l] = (0..4).map(|i| o[(i, a)] * self.r[i][j][k][l]).sum();
                    }
                }
            }
        }
        let mut t2 = [[[[0.0f64; 4]; 4]; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        t2[a][b][k][l] = (0..4).map(|j| o[(j, b)] * t1[a][j][k][l]).sum();
                    }
                }
            }
        }
        let mut t3 = [[[[0.0f64; 4]; 4]; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for l in 0..4 {
                        t3[a][b][c][l] = (0..4).map(|k| o[(k, c)] * t2[a][b][k][l]).sum();
                    }
                }
            }
        }
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        r[a][b][c][d] = (0..4).map(|l| o[(l, d)] * t3[a][b][c][l]).sum();
                    }
                }
            }
        }
        CurvatureTensor { r }
    }

    /// Canonical nonzero component list, 1-based, one entry per symmetry
    /// orbit: `i < j`, `k < l`, `(i, j) <= (k, l)` lexicographically.
    pub fn canonical_components(&self) -> Vec<(usize, usize, usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..4 {
            for j in (i + 1)..4 {
                for k in 0..4 {
                    for l in (k + 1)..4 {
                        if (k, l) < (i, j) {
                            continue;
                        }
                        let v = self.r[i][j][k][l];
                        if v != 0.0 {
                            out.push((i + 1, j + 1, k + 1, l + 1, v));
                        }
                    }
                }
            }
        }
        out
    }
}
