//! H-representation polytopes with exact vertex enumeration, Dykstra
//! projection, and stationary-point enumeration for quadratic objectives.
//!
//! Everything here works at toy scale (dimension 3 or 6, at most a dozen
//! constraints), so exhaustive basis selection is the right tool: every
//! vertex comes from solving a square linear system, every face from a
//! subset of active constraints.

use nalgebra::{DMatrix, DVector, SymmetricEigen};


/// Vertices closer than this (max-norm) are considered identical.
pub const VERTEX_DEDUP_TOL: f64 = 1e-10;
/// Feasibility slack allowed when filtering candidate points.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// One linear constraint `coeffs . x (= or <=) bound`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: DVector<f64>,
    pub bound: f64,
    pub label: String,
}

impl Constraint {
    pub fn new(coeffs: &[f64], bound: f64, label: impl Into<String>) -> Self {
        Constraint { coeffs: DVector::from_row_slice(coeffs), bound, label: label.into() }
    }

    fn value(&self, x: &DVector<f64>) -> f64 {
        self.coeffs.dot(x)
    }
}

/// Bounded polyhedron `{x : E x = e, A x <= b}`.
#[derive(Clone, Debug)]
pub struct Polytope {
    pub dim: usize,
    pub eq: Vec<Constraint>,
    pub ineq: Vec<Constraint>,
}

fn for_each_combination(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return;
    }
    loop {
        f(&idx);
        // advance the combination
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in (i + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

impl Polytope {
    /// Largest violation of any constraint at `x` (0 when feasible).
    pub fn violation(&self, x: &DVector<f64>) -> f64 {
        let mut worst = 0.0f64;
        for c in &self.eq {
            worst = worst.max((c.value(x) - c.bound).abs());
        }
        for c in &self.ineq {
            worst = worst.max(c.value(x) - c.bound);
        }
        worst
    }

    pub fn is_feasible(&self, x: &DVector<f64>, tol: f64) -> bool {
        self.violation(x) <= tol
    }

    /// Labels of the constraints active at `x` within `tol`.
    pub fn active_labels(&self, x: &DVector<f64>, tol: f64) -> Vec<String> {
        let mut labels = Vec::new();
        for c in &self.eq {
            labels.push(c.label.clone());
        }
        for c in &self.ineq {
            if (c.value(x) - c.bound).abs() <= tol {
                labels.push(c.label.clone());
            }
        }
        labels
    }

    /// Exhaustive vertex enumeration: every choice of `dim - |eq|`
    /// inequalities completing the equalities to a square system is solved
    /// and feasibility-filtered, with duplicates merged at
    /// [`VERTEX_DEDUP_TOL`].
    pub fn vertices(&self) -> Vec<DVector<f64>> {
        let k = self.dim.saturating_sub(self.eq.len());
        let mut found: Vec<DVector<f64>> = Vec::new();
        for_each_combination(self.ineq.len(), k, &mut |chosen| {
            let mut a = DMatrix::<f64>::zeros(self.dim, self.dim);
            let mut b = DVector::<f64>::zeros(self.dim);
            for (r, c) in self.eq.iter().enumerate() {
                a.row_mut(r).copy_from(&c.coeffs.transpose());
                b[r] = c.bound;
            }
            for (r, &ci) in chosen.iter().enumerate() {
                let row = self.eq.len() + r;
                a.row_mut(row).copy_from(&self.ineq[ci].coeffs.transpose());
                b[row] = self.ineq[ci].bound;
            }
            if let Some(x) = a.lu().solve(&b) {
                if x.iter().all(|v| v.is_finite())
                    && self.is_feasible(&x, FEASIBILITY_TOL)
                    && !found.iter().any(|y| (&x - y).amax() <= VERTEX_DEDUP_TOL)
                {
                    found.push(x);
                }
            }
        });
        found
    }

    /// Euclidean projection onto the polytope by Dykstra's alternating
    /// projections over the halfspaces and hyperplanes.
    pub fn project(&self, z: &DVector<f64>) -> DVector<f64> {
        let sets: Vec<(&Constraint, bool)> = self
            .eq
            .iter()
            .map(|c| (c, true))
            .chain(self.ineq.iter().map(|c| (c, false)))
            .collect();
        let mut x = z.clone();
        let mut corrections: Vec<DVector<f64>> = vec![DVector::zeros(self.dim); sets.len()];
        for _cycle in 0..5000 {
            let mut moved = 0.0f64;
            for (i, (c, is_eq)) in sets.iter().enumerate() {
                let y = &x + &corrections[i];
                let v = c.value(&y) - c.bound;
                let p = if *is_eq || v > 0.0 {
                    &y - &c.coeffs * (v / c.coeffs.norm_squared())
                } else {
                    y.clone()
                };
                corrections[i] = &y - &p;
                moved = moved.max((&p - &x).amax());
                x = p;
            }
            if moved < 1e-14 && self.violation(&x) < 1e-12 {
                break;
            }
        }
        x
    }

    /// Interior stationary points of the quadratic `x^T Q x` on each face,
    /// filtered by the curvature condition a local optimum needs there
    /// (restricted Hessian NSD for `maximize`, PSD otherwise). Together
    /// with the vertices these carry every local optimum of a quadratic
    /// over the polytope.
    pub fn stationary_candidates(&self, q: &DMatrix<f64>, maximize: bool) -> Vec<DVector<f64>> {
        assert!(self.ineq.len() <= 20, "face enumeration is exponential in the constraint count");
        let mut out: Vec<DVector<f64>> = Vec::new();
        for mask in 0u32..(1u32 << self.ineq.len()) {
            let rows = self.eq.len() + mask.count_ones() as usize;
            let mut a = DMatrix::<f64>::zeros(rows, self.dim);
            let mut b = DVector::<f64>::zeros(rows);
            for (r, c) in self.eq.iter().enumerate() {
                a.row_mut(r).copy_from(&c.coeffs.transpose());
                b[r] = c.bound;
            }
            let mut r = self.eq.len();
            for (i, c) in self.ineq.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    a.row_mut(r).copy_from(&c.coeffs.transpose());
                    b[r] = c.bound;
                    r += 1;
                }
            }
            let Some((x_p, null)) = affine_solve(&a, &b) else { continue };
            let x = if null.ncols() == 0 {
                x_p
            } else {
                // stationarity along the face: N^T Q (x_p + N y) = 0
                let h = null.transpose() * q * &null;
                let rhs = -(null.transpose() * q * &x_p);
                let Some((y, _)) = affine_solve(&h, &rhs) else { continue };
                if (&h * &y - &rhs).amax() > 1e-8 {
                    continue; // no stationary point on this face
                }
                let eig = SymmetricEigen::new((&h + h.transpose()) * 0.5);
                let ok = if maximize {
                    eig.eigenvalues.iter().all(|&ev| ev <= 1e-9)
                } else {
                    eig.eigenvalues.iter().all(|&ev| ev >= -1e-9)
                };
                if !ok {
                    continue;
                }
                &x_p + &null * y
            };
            if self.is_feasible(&x, FEASIBILITY_TOL)
                && !out.iter().any(|y| (&x - y).amax() <= VERTEX_DEDUP_TOL)
            {
                out.push(x);
            }
        }
        out
    }
}

/// Minimum-norm least-squares solution of `A x = b` plus an orthonormal
/// basis of the null space of `A`, via the eigendecomposition of `A^T A`.
/// Returns `None` when the system is inconsistent.
fn affine_solve(a: &DMatrix<f64>, b: &DVector<f64>) -> Option<(DVector<f64>, DMatrix<f64>)> {
    let dim = a.ncols();
    if a.nrows() == 0 {
        return Some((DVector::zeros(dim), DMatrix::identity(dim, dim)));
    }
    let ata = a.transpose() * a;
    let atb = a.transpose() * b;
    let eig = SymmetricEigen::new(ata);
    let max_ev = eig.eigenvalues.iter().fold(0.0f64, |m, &v| m.max(v));
    let cut = max_ev.max(1.0) * 1e-12;
    let mut x = DVector::<f64>::zeros(dim);
    let mut null_cols: Vec<DVector<f64>> = Vec::new();
    for i in 0..dim {
        let v = eig.eigenvectors.column(i).into_owned();
        if eig.eigenvalues[i] > cut {
            x += &v * (v.dot(&atb) / eig.eigenvalues[i]);
        } else {
            null_cols.push(v);
        }
    }
    let scale = b.amax().max(1.0);
    if (a * &x - b).amax() > 1e-8 * scale {
        return None;
    }
    let null = if null_cols.is_empty() {
        DMatrix::zeros(dim, 0)
    } else {
        DMatrix::from_columns(&null_cols.iter().map(|c| c.column(0)).collect::<Vec<_>>())
    };
    Some((x, null))
}

/// Projected-gradient ascent/descent for the quadratic `x^T Q x` over the
/// polytope, with backtracking steps. Terminates when the
/// gradient-projection residual drops below `resid_tol`.
pub fn projected_gradient(
    poly: &Polytope,
    q: &DMatrix<f64>,
    maximize: bool,
    x0: &DVector<f64>,
    resid_tol: f64,
    max_iter: usize,
) -> DVector<f64> {
    let sign = if maximize { 1.0 } else { -1.0 };
    let mut x = poly.project(x0);
    let mut step = 1.0f64;
    for _ in 0..max_iter {
        let grad = q * &x * 2.0 * sign;
        // gradient-projection residual at the current iterate
        let probe = poly.project(&(&x + &grad));
        if (&probe - &x).amax() < resid_tol {
            break;
        }
        let fx = sign * (x.dot(&(q * &x)));
        let mut accepted = false;
        while step > 1e-16 {
            let cand = poly.project(&(&x + &grad * step));
            let fc = sign * (cand.dot(&(q * &cand)));
            let dx = (&cand - &x).norm_squared();
            if fc >= fx + 1e-4 * dx / step.max(1e-16) - 1e-15 && dx > 0.0 {
                x = cand;
                accepted = true;
                step = (step * 1.6).min(4.0);
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    snap_to_active_face(poly, q, maximize, &x)
}

/// Snaps a near-optimal iterate to the exact stationary point of its
/// active face (one linear solve). Projected gradient identifies the right
/// face long before its iterates are accurate, so this turns an
/// approximately converged point into an exact one. Falls back to the
/// input when no snapped point is feasible and at least as good.
pub fn snap_to_active_face(
    poly: &Polytope,
    q: &DMatrix<f64>,
    maximize: bool,
    x: &DVector<f64>,
) -> DVector<f64> {
    let sign = if maximize { 1.0 } else { -1.0 };
    let current = sign * x.dot(&(q * x));
    let scale = x.amax().max(1.0);
    for active_tol in [1e-4, 1e-6, 1e-8] {
        let mut rows: Vec<&Constraint> = poly.eq.iter().collect();
        for c in &poly.ineq {
            if (c.value(x) - c.bound).abs() <= active_tol * scale {
                rows.push(c);
            }
        }
        let mut a = DMatrix::<f64>::zeros(rows.len(), poly.dim);
        let mut b = DVector::<f64>::zeros(rows.len());
        for (r, c) in rows.iter().enumerate() {
            a.row_mut(r).copy_from(&c.coeffs.transpose());
            b[r] = c.bound;
        }
        let Some((x_p, null)) = affine_solve(&a, &b) else { continue };
        let snapped = if null.ncols() == 0 {
            x_p
        } else {
            let h = null.transpose() * q * &null;
            let rhs = -(null.transpose() * q * &x_p);
            let Some((y, _)) = affine_solve(&h, &rhs) else { continue };
            if (&h * &y - &rhs).amax() > 1e-8 {
                continue;
            }
            &x_p + &null * y
        };
        let value = sign * snapped.dot(&(q * &snapped));
        if poly.is_feasible(&snapped, FEASIBILITY_TOL) && value >= current - 1e-10 {
            return snapped;
        }
    }
    x.clone()
}

/// KKT residual of `x` as a candidate optimum of `x^T Q x` over the
/// polytope: the distance from the gradient to the cone spanned by the
/// active constraint normals with correctly signed multipliers.
pub fn kkt_residual(poly: &Polytope, q: &DMatrix<f64>, maximize: bool, x: &DVector<f64>) -> f64 {
    let sign = if maximize { 1.0 } else { -1.0 };
    let grad = q * x * 2.0 * sign;
    // at a max of f: grad = sum nu_i a_i with nu_i >= 0 on active inequalities
    let mut normals: Vec<(DVector<f64>, bool)> =
        poly.eq.iter().map(|c| (c.coeffs.clone(), false)).collect();
    for c in &poly.ineq {
        if (c.value(x) - c.bound).abs() <= 1e-7 * c.bound.abs().max(1.0) {
            normals.push((c.coeffs.clone(), true));
        }
    }
    if normals.is_empty() {
        return grad.amax();
    }
    let a = DMatrix::from_columns(&normals.iter().map(|(n, _)| n.column(0)).collect::<Vec<_>>());
    let Some((mut nu, _)) = affine_solve(&a, &grad) else {
        return grad.amax();
    };
    for (i, (_, signed)) in normals.iter().enumerate() {
        if *signed && nu[i] < 0.0 {
            nu[i] = 0.0;
        }
    }
    (&a * nu - grad).amax()
}
