//! Extremal verification: the pointwise curvature bounds re-derived as
//! exact optima of quadratic forms over linear constraint sets in
//! `(lambda, mu)` space.
//!
//! Convex objectives are maximized exactly by vertex enumeration (a convex
//! function on a polytope peaks at a vertex) and minimized by projected
//! gradient with a KKT certificate. The indefinite cross term falls back
//! to stationary-face enumeration, which is exact as well. A seeded
//! sampling route provides an independent cross-check of every optimum.

mod polytope;
mod sampling;

pub use polytope::{
    kkt_residual, projected_gradient, snap_to_active_face, Constraint, Polytope,
    FEASIBILITY_TOL, VERTEX_DEDUP_TOL,
};
pub use sampling::{sample_points, sampled_optimum, sampled_optimum_seq};

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{CurvError, Result};
use crate::invariants::{make_report, InequalityReport};
use crate::spectrum::SingerThorpeSpectrum;

/// Constraint families, one per curvature condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    /// Nonpositive isotropic curvature: `alpha_i^± = lambda_i ± mu_i - rho >= 0`.
    Nic,
    /// Nonpositive curvature operator: `lambda_i ± mu_i <= 0`.
    Npco,
    /// `sup K <= rho/6`, i.e. `a3+ + a3- <= rho/3` on ordered block spectra.
    Supk,
    /// Kaehler anti-self-dual eigenvalues: `gamma` ascending, trace-free,
    /// `gamma_1 >= 2 rho/3`.
    KaehlerGamma,
}

impl Family {
    pub fn label(&self) -> &'static str {
        match self {
            Family::Nic => "NIC",
            Family::Npco => "NPCO",
            Family::Supk => "SUPK",
            Family::KaehlerGamma => "KAEHLER_GAMMA",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s.to_ascii_uppercase().as_str() {
            "NIC" => Some(Family::Nic),
            "NPCO" => Some(Family::Npco),
            "SUPK" => Some(Family::Supk),
            "KAEHLER_GAMMA" | "KAEHLER" | "GAMMA" => Some(Family::KaehlerGamma),
            _ => None,
        }
    }

    pub const ALL: [Family; 4] = [Family::Nic, Family::Npco, Family::Supk, Family::KaehlerGamma];

    fn dim(&self) -> usize {
        match self {
            Family::KaehlerGamma => 3,
            _ => 6,
        }
    }
}

/// Quadratic objectives over `(lambda, mu)` (or `gamma`) space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Objective {
    /// `|lambda + mu|^2`
    QPlus,
    /// `|lambda - mu|^2`
    QMinus,
    /// `|lambda|^2 + |mu|^2`
    Euler,
    /// `<lambda, mu>` (indefinite)
    Cross,
    /// `|gamma|^2`
    GammaNorm,
}

impl Objective {
    pub fn label(&self) -> &'static str {
        match self {
            Objective::QPlus => "Q_PLUS",
            Objective::QMinus => "Q_MINUS",
            Objective::Euler => "EULER",
            Objective::Cross => "CROSS",
            Objective::GammaNorm => "GAMMA_NORM",
        }
    }

    pub fn parse(s: &str) -> Option<Objective> {
        match s.to_ascii_uppercase().as_str() {
            "Q_PLUS" | "QPLUS" => Some(Objective::QPlus),
            "Q_MINUS" | "QMINUS" => Some(Objective::QMinus),
            "EULER" => Some(Objective::Euler),
            "CROSS" => Some(Objective::Cross),
            "GAMMA_NORM" | "GAMMA" => Some(Objective::GammaNorm),
            _ => None,
        }
    }

    pub fn is_convex(&self) -> bool {
        !matches!(self, Objective::Cross)
    }

    /// Symmetric matrix of the form `x^T Q x`.
    pub(crate) fn matrix(&self, dim: usize) -> DMatrix<f64> {
        let mut q = DMatrix::<f64>::zeros(dim, dim);
        match self {
            Objective::GammaNorm => {
                for i in 0..3 {
                    q[(i, i)] = 1.0;
                }
            }
            Objective::Euler => {
                for i in 0..6 {
                    q[(i, i)] = 1.0;
                }
            }
            Objective::QPlus | Objective::QMinus => {
                let s = if *self == Objective::QPlus { 1.0 } else { -1.0 };
                for i in 0..3 {
                    q[(i, i)] = 1.0;
                    q[(i + 3, i + 3)] = 1.0;
                    q[(i, i + 3)] = s;
                    q[(i + 3, i)] = s;
                }
            }
            Objective::Cross => {
                for i in 0..3 {
                    q[(i, i + 3)] = 0.5;
                    q[(i + 3, i)] = 0.5;
                }
            }
        }
        q
    }

    fn compatible(&self, family: Family) -> bool {
        match self {
            Objective::GammaNorm => family == Family::KaehlerGamma,
            _ => family != Family::KaehlerGamma,
        }
    }

    pub fn eval(&self, x: &DVector<f64>) -> f64 {
        match self {
            Objective::GammaNorm | Objective::Euler => x.norm_squared(),
            Objective::QPlus => (0..3).map(|i| (x[i] + x[i + 3]).powi(2)).sum(),
            Objective::QMinus => (0..3).map(|i| (x[i] - x[i + 3]).powi(2)).sum(),
            Objective::Cross => (0..3).map(|i| x[i] * x[i + 3]).sum(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Max,
    Min,
}

impl Direction {
    pub fn parse(s: &str) -> Option<Direction> {
        match s.to_ascii_lowercase().as_str() {
            "max" => Some(Direction::Max),
            "min" => Some(Direction::Min),
            _ => None,
        }
    }
}

/// How an optimum was certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    VertexEnumeration,
    ProjectedGradient,
    FaceEnumeration,
    Sampled,
}

/// A constraint family instantiated at a fixed `rho < 0`.
#[derive(Clone, Debug)]
pub struct ConstraintSet {
    pub family: Family,
    pub rho: f64,
    pub polytope: Polytope,
}

/// An optimum with its witness and the active constraints certifying it.
#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub family: &'static str,
    pub objective: &'static str,
    pub direction: Direction,
    pub optimum: f64,
    pub witness: Vec<f64>,
    pub method: Method,
    pub certificate: Vec<String>,
}

fn ordering_rows(sign: f64, tag: &str) -> Vec<Constraint> {
    // (lambda_i + s mu_i) non-decreasing in i
    vec![
        Constraint::new(&[1.0, -1.0, 0.0, sign, -sign, 0.0], 0.0, format!("a{tag}[1]<=a{tag}[2]")),
        Constraint::new(&[0.0, 1.0, -1.0, 0.0, sign, -sign], 0.0, format!("a{tag}[2]<=a{tag}[3]")),
    ]
}

/// Builds the H-representation of a family at a given `rho < 0`.
pub fn build_constraints(family: Family, rho: f64) -> Result<ConstraintSet> {
    if !(rho < 0.0) || !rho.is_finite() {
        return Err(CurvError::InvalidRho(rho));
    }
    let polytope = match family {
        Family::KaehlerGamma => Polytope {
            dim: 3,
            eq: vec![Constraint::new(&[1.0, 1.0, 1.0], 0.0, "sum(gamma)=0")],
            ineq: vec![
                Constraint::new(&[1.0, -1.0, 0.0], 0.0, "gamma[1]<=gamma[2]"),
                Constraint::new(&[0.0, 1.0, -1.0], 0.0, "gamma[2]<=gamma[3]"),
                Constraint::new(&[-1.0, 0.0, 0.0], -2.0 * rho / 3.0, "gamma[1]>=2rho/3"),
            ],
        },
        _ => {
            let eq = vec![
                Constraint::new(&[1.0, 1.0, 1.0, 0.0, 0.0, 0.0], rho, "sum(lambda)=rho"),
                Constraint::new(&[0.0, 0.0, 0.0, 1.0, 1.0, 1.0], 0.0, "sum(mu)=0"),
            ];
            let mut ineq = ordering_rows(1.0, "+");
            ineq.extend(ordering_rows(-1.0, "-"));
            match family {
                Family::Nic => {
                    for i in 0..3 {
                        for (s, tag) in [(1.0, "+"), (-1.0, "-")] {
                            let mut row = [0.0; 6];
                            row[i] = -1.0;
                            row[i + 3] = -s;
                            ineq.push(Constraint::new(&row, -rho, format!("alpha{tag}[{}]>=0", i + 1)));
                        }
                    }
                }
                Family::Npco => {
                    for i in 0..3 {
                        for (s, tag) in [(1.0, "+"), (-1.0, "-")] {
                            let mut row = [0.0; 6];
                            row[i] = 1.0;
                            row[i + 3] = s;
                            ineq.push(Constraint::new(&row, 0.0, format!("a{tag}[{}]<=0", i + 1)));
                        }
                    }
                }
                Family::Supk => {
                    // a3+ + a3- = 2 lambda_3 <= rho/3
                    ineq.push(Constraint::new(
                        &[0.0, 0.0, 2.0, 0.0, 0.0, 0.0],
                        rho / 3.0,
                        "a+[3]+a-[3]<=rho/3",
                    ));
                }
                Family::KaehlerGamma => unreachable!(),
            }
            Polytope { dim: 6, eq, ineq }
        }
    };
    Ok(ConstraintSet { family, rho, polytope })
}

/// A strictly feasible (or boundary) model point of each family, used to
/// anchor samplers and assert nonemptiness.
pub fn anchor_point(family: Family, rho: f64) -> DVector<f64> {
    match family {
        // complex-hyperbolic spectrum scaled to rho
        Family::Nic | Family::Supk => DVector::from_row_slice(&[
            2.0 * rho / 3.0,
            rho / 6.0,
            rho / 6.0,
            rho / 3.0,
            -rho / 6.0,
            -rho / 6.0,
        ]),
        // product-of-planes spectrum
        Family::Npco => DVector::from_row_slice(&[rho, 0.0, 0.0, 0.0, 0.0, 0.0]),
        Family::KaehlerGamma => DVector::zeros(3),
    }
}

fn lex_less(a: &DVector<f64>, b: &DVector<f64>) -> bool {
    for i in 0..a.len() {
        if (a[i] - b[i]).abs() > 1e-12 {
            return a[i] < b[i];
        }
    }
    false
}

fn pick_best(
    candidates: Vec<DVector<f64>>,
    objective: Objective,
    direction: Direction,
) -> Option<(f64, DVector<f64>)> {
    let mut best: Option<(f64, DVector<f64>)> = None;
    for x in candidates {
        let v = objective.eval(&x);
        let replace = match &best {
            None => true,
            Some((bv, bx)) => {
                let better = match direction {
                    Direction::Max => v > bv + 1e-9,
                    Direction::Min => v < bv - 1e-9,
                };
                // merge ties by lexicographically smallest witness
                better || ((v - bv).abs() <= 1e-9 && lex_less(&x, bx))
            }
        };
        if replace {
            best = Some((v, x));
        }
    }
    best
}

/// Exact optimum of a quadratic objective over a constraint family.
///
/// Maxima of convex objectives come from vertex enumeration, minima from
/// projected gradient (16 deterministic starts, KKT-checked); the
/// indefinite cross objective uses stationary-face enumeration in both
/// directions.
pub fn maximize(
    cs: &ConstraintSet,
    objective: Objective,
    direction: Direction,
) -> Result<SearchResult> {
    if !objective.compatible(cs.family) {
        return Err(CurvError::ObjectiveMismatch {
            objective: objective.label().to_string(),
            family: cs.family.label().to_string(),
        });
    }
    let q = objective.matrix(cs.family.dim());
    let (value, witness, method) = match (objective.is_convex(), direction) {
        (true, Direction::Max) => {
            let vertices = cs.polytope.vertices();
            if vertices.is_empty() {
                return Err(CurvError::Infeasible);
            }
            let (v, x) = pick_best(vertices, objective, direction).ok_or(CurvError::Infeasible)?;
            (v, x, Method::VertexEnumeration)
        }
        (true, Direction::Min) => {
            let mut starts = vec![anchor_point(cs.family, cs.rho)];
            starts.extend(sample_points(cs, 15, 0xC0FFEE));
            let finals = crate::par::map_slice(&starts, |x0| {
                projected_gradient(&cs.polytope, &q, false, x0, 1e-10, 4000)
            });
            let (v, x) = pick_best(finals, objective, direction).ok_or(CurvError::Infeasible)?;
            if kkt_residual(&cs.polytope, &q, false, &x) > 1e-8 * (1.0 + cs.rho.abs()) {
                return Err(CurvError::Unbounded);
            }
            (v, x, Method::ProjectedGradient)
        }
        (false, dir) => {
            let mut candidates = cs.polytope.stationary_candidates(&q, dir == Direction::Max);
            candidates.extend(cs.polytope.vertices());
            if candidates.is_empty() {
                return Err(CurvError::Infeasible);
            }
            let (v, x) = pick_best(candidates, objective, dir).ok_or(CurvError::Infeasible)?;
            (v, x, Method::FaceEnumeration)
        }
    };
    let certificate = cs.polytope.active_labels(&witness, 1e-9 * (1.0 + cs.rho.abs()));
    Ok(SearchResult {
        family: cs.family.label(),
        objective: objective.label(),
        direction,
        optimum: value,
        witness: witness.iter().copied().collect(),
        method,
        certificate,
    })
}

/// The `(objective, direction)` pairs a family supports.
pub fn supported_runs(family: Family) -> Vec<(Objective, Direction)> {
    let objectives: &[Objective] = match family {
        Family::KaehlerGamma => &[Objective::GammaNorm],
        _ => &[Objective::QPlus, Objective::QMinus, Objective::Euler, Objective::Cross],
    };
    objectives
        .iter()
        .flat_map(|&o| [(o, Direction::Max), (o, Direction::Min)])
        .collect()
}

/// Converts a 6-dimensional witness back into a spectrum.
pub fn witness_spectrum(witness: &[f64]) -> Result<SingerThorpeSpectrum> {
    if witness.len() != 6 {
        return Err(CurvError::InvalidSpectrum(format!(
            "witness has {} coordinates, expected 6",
            witness.len()
        )));
    }
    let lambda = [witness[0], witness[1], witness[2]];
    let mut mu = [witness[3], witness[4], witness[5]];
    // clear the equality-constraint roundoff before revalidation
    let shift: f64 = mu.iter().sum::<f64>() / 3.0;
    for m in &mut mu {
        *m -= shift;
    }
    SingerThorpeSpectrum::from_lambda_mu(lambda, mu)
}

/// Re-derives the five pointwise bounds as exact optima and reports each
/// one with its slack (zero: the bounds are tight).
pub fn verify_pointwise_bounds(rho: f64) -> Result<Vec<InequalityReport>> {
    let nic = build_constraints(Family::Nic, rho)?;
    let npco = build_constraints(Family::Npco, rho)?;
    let supk = build_constraints(Family::Supk, rho)?;
    let kg = build_constraints(Family::KaehlerGamma, rho)?;
    let rho2 = rho * rho;
    let tol = 1e-9;

    let fwd = maximize(&nic, Objective::QPlus, Direction::Max)?
        .optimum
        .max(maximize(&nic, Objective::QMinus, Direction::Max)?.optimum);
    let rev = maximize(&nic, Objective::QPlus, Direction::Min)?
        .optimum
        .min(maximize(&nic, Objective::QMinus, Direction::Min)?.optimum);
    let npmax = maximize(&npco, Objective::QPlus, Direction::Max)?
        .optimum
        .max(maximize(&npco, Objective::QMinus, Direction::Max)?.optimum);
    let gamma = maximize(&kg, Objective::GammaNorm, Direction::Max)?.optimum;
    let sup = maximize(&supk, Objective::Euler, Direction::Max)?.optimum;

    Ok(vec![
        make_report("nic_forward_max", fwd, 3.0 * rho2, true, tol),
        make_report("nic_reverse_min", rho2 / 3.0, rev, true, tol),
        make_report("npco_max", npmax, rho2, true, tol),
        make_report("kaehler_gamma_max", gamma, 8.0 * rho2 / 3.0, true, tol),
        make_report("supk_euler_max", sup, 2.0 * rho2 / 3.0, true, tol),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rejects_nonnegative_rho_and_mismatched_objectives() {
        assert!(matches!(build_constraints(Family::Nic, 0.5), Err(CurvError::InvalidRho(_))));
        let cs = build_constraints(Family::Nic, -1.0).unwrap();
        assert!(matches!(
            maximize(&cs, Objective::GammaNorm, Direction::Max),
            Err(CurvError::ObjectiveMismatch { .. })
        ));
        let kg = build_constraints(Family::KaehlerGamma, -1.0).unwrap();
        assert!(matches!(
            maximize(&kg, Objective::Euler, Direction::Max),
            Err(CurvError::ObjectiveMismatch { .. })
        ));
    }

    #[test]
    fn anchors_are_feasible() {
        for family in Family::ALL {
            for rho in [-1.0, -6.0] {
                let cs = build_constraints(family, rho).unwrap();
                let anchor = anchor_point(family, rho);
                assert!(
                    cs.polytope.is_feasible(&anchor, 1e-9),
                    "{} anchor infeasible at rho={rho}",
                    family.label()
                );
            }
        }
    }

    #[test]
    fn nic_forward_and_reverse_bounds() {
        let cs = build_constraints(Family::Nic, -1.0).unwrap();
        let max = maximize(&cs, Objective::QPlus, Direction::Max).unwrap();
        assert_abs_diff_eq!(max.optimum, 3.0, epsilon = 1e-9);
        assert_eq!(max.method, Method::VertexEnumeration);
        // witness has lambda + mu = (rho, rho, -rho)
        let w = &max.witness;
        let a_plus = [w[0] + w[3], w[1] + w[4], w[2] + w[5]];
        assert_abs_diff_eq!(a_plus[0], -1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(a_plus[1], -1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(a_plus[2], 1.0, epsilon = 1e-9);

        let min = maximize(&cs, Objective::QPlus, Direction::Min).unwrap();
        assert_abs_diff_eq!(min.optimum, 1.0 / 3.0, epsilon = 1e-8);
        assert_eq!(min.method, Method::ProjectedGradient);
        let a_plus = [
            min.witness[0] + min.witness[3],
            min.witness[1] + min.witness[4],
            min.witness[2] + min.witness[5],
        ];
        for v in a_plus {
            assert_abs_diff_eq!(v, -1.0 / 3.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn npco_and_gamma_and_supk_bounds() {
        let npco = build_constraints(Family::Npco, -1.0).unwrap();
        let m = maximize(&npco, Objective::QPlus, Direction::Max).unwrap();
        assert_abs_diff_eq!(m.optimum, 1.0, epsilon = 1e-9);
        // witness has lambda + mu = (rho, 0, 0)
        let a_plus = [
            m.witness[0] + m.witness[3],
            m.witness[1] + m.witness[4],
            m.witness[2] + m.witness[5],
        ];
        assert_abs_diff_eq!(a_plus[0], -1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(a_plus[1], 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(a_plus[2], 0.0, epsilon = 1e-9);

        let kg = build_constraints(Family::KaehlerGamma, -1.0).unwrap();
        let g = maximize(&kg, Objective::GammaNorm, Direction::Max).unwrap();
        assert_abs_diff_eq!(g.optimum, 8.0 / 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(g.witness[0], -2.0 / 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(g.witness[1], -2.0 / 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(g.witness[2], 4.0 / 3.0, epsilon = 1e-9);

        let supk = build_constraints(Family::Supk, -1.0).unwrap();
        let s = maximize(&supk, Objective::Euler, Direction::Max).unwrap();
        assert_abs_diff_eq!(s.optimum, 2.0 / 3.0, epsilon = 1e-9);
        // attained by the complex-hyperbolic spectrum
        let spec = witness_spectrum(&s.witness).unwrap();
        let anchor = anchor_point(Family::Supk, -1.0);
        for i in 0..3 {
            assert_abs_diff_eq!(spec.lambda()[i], anchor[i], epsilon = 1e-8);
            assert_abs_diff_eq!(spec.mu()[i].abs(), anchor[i + 3].abs(), epsilon = 1e-8);
        }
    }

    #[test]
    fn cross_objective_exact_on_product_families() {
        // max <lambda, mu> over NIC splits into max |a+|^2/4 - min |a-|^2/4
        let cs = build_constraints(Family::Nic, -1.0).unwrap();
        let c = maximize(&cs, Objective::Cross, Direction::Max).unwrap();
        assert_abs_diff_eq!(c.optimum, (3.0 - 1.0 / 3.0) / 4.0, epsilon = 1e-8);
        assert_eq!(c.method, Method::FaceEnumeration);
        let cmin = maximize(&cs, Objective::Cross, Direction::Min).unwrap();
        assert_abs_diff_eq!(cmin.optimum, -(3.0 - 1.0 / 3.0) / 4.0, epsilon = 1e-8);
    }

    #[test]
    fn scaling_covariance_of_all_bounds() {
        let a = verify_pointwise_bounds(-1.0).unwrap();
        let b = verify_pointwise_bounds(-6.0).unwrap();
        for (ra, rb) in a.iter().zip(b.iter()) {
            assert!(ra.satisfied && rb.satisfied);
            assert!(ra.equality, "{} not tight", ra.name);
            assert!(rb.equality, "{} not tight", rb.name);
            // optima scale exactly as rho^2
            let (va, vb) = if ra.name == "nic_reverse_min" {
                (ra.rhs, rb.rhs)
            } else {
                (ra.lhs, rb.lhs)
            };
            assert_abs_diff_eq!(vb / va, 36.0, epsilon = 36.0 * 1e-9);
        }
        let expected = [108.0, 12.0, 36.0, 96.0, 24.0];
        for (r, e) in b.iter().zip(expected) {
            let v = if r.name == "nic_reverse_min" { r.rhs } else { r.lhs };
            assert_abs_diff_eq!(v, e, epsilon = 1e-7);
        }
    }

    #[test]
    fn ordering_constraints_do_not_change_optima() {
        let cs = build_constraints(Family::Nic, -1.0).unwrap();
        let with = maximize(&cs, Objective::QPlus, Direction::Max).unwrap().optimum;
        let mut free = cs.clone();
        free.polytope.ineq.retain(|c| !c.label.contains("<=a"));
        let without = maximize(&free, Objective::QPlus, Direction::Max).unwrap().optimum;
        assert_abs_diff_eq!(with, without, epsilon = 1e-9);
    }

    #[test]
    fn interior_points_stay_strictly_inside_the_bounds() {
        let cs = build_constraints(Family::Nic, -1.0).unwrap();
        let pts = sample_points(&cs, 200, 11);
        for p in &pts {
            assert!(cs.polytope.is_feasible(p, 1e-9));
            let v = Objective::QPlus.eval(p);
            assert!((1.0 / 3.0 - 1e-9..=3.0 + 1e-9).contains(&v));
        }
    }
}
