//! Seeded feasible-point sampling and the sampled optimization fallback.
//!
//! The samplers draw uniformly from each family's natural simplex
//! parametrization and re-sort into the ordered representative, so every
//! sample is exactly feasible. The sampled optimizer is the independent
//! cross-check for the exact vertex/face results.

use nalgebra::DVector;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CurvError, Result};
use crate::par;

use super::{
    anchor_point, projected_gradient, ConstraintSet, Direction, Family, Method, Objective,
    SearchResult,
};

/// Uniform sample from `{x >= 0, sum x = total}` (total >= 0), ascending.
fn simplex_ascending(rng: &mut ChaCha8Rng, total: f64) -> [f64; 3] {
    let mut u = rng.random_range(0.0..1.0f64);
    let mut v = rng.random_range(0.0..1.0f64);
    if u > v {
        std::mem::swap(&mut u, &mut v);
    }
    let mut parts = [u * total, (v - u) * total, (1.0 - v) * total];
    parts.sort_by(f64::total_cmp);
    parts
}

/// Ascending nonpositive triple summing to `rho < 0`.
fn npco_block(rng: &mut ChaCha8Rng, rho: f64) -> [f64; 3] {
    let mut b = simplex_ascending(rng, -rho).map(|x| -x);
    b.sort_by(f64::total_cmp);
    b
}

fn assemble(a_plus: [f64; 3], a_minus: [f64; 3]) -> DVector<f64> {
    let mut x = DVector::zeros(6);
    for i in 0..3 {
        x[i] = 0.5 * (a_plus[i] + a_minus[i]);
        x[i + 3] = 0.5 * (a_plus[i] - a_minus[i]);
    }
    x
}

fn sample_one(family: Family, rho: f64, rng: &mut ChaCha8Rng) -> DVector<f64> {
    match family {
        Family::Nic => {
            // alpha^± live on the simplex {alpha >= 0, sum = -2 rho}
            let a_plus = simplex_ascending(rng, -2.0 * rho).map(|a| a + rho);
            let a_minus = simplex_ascending(rng, -2.0 * rho).map(|a| a + rho);
            assemble(a_plus, a_minus)
        }
        Family::Npco => assemble(npco_block(rng, rho), npco_block(rng, rho)),
        Family::Supk => {
            for _ in 0..2000 {
                let a_plus = npco_block(rng, rho);
                let a_minus = npco_block(rng, rho);
                if a_plus[2] + a_minus[2] <= rho / 3.0 {
                    return assemble(a_plus, a_minus);
                }
            }
            anchor_point(family, rho)
        }
        Family::KaehlerGamma => {
            let lo = 2.0 * rho / 3.0;
            let hi = -4.0 * rho / 3.0;
            for _ in 0..2000 {
                let g1 = rng.random_range(lo..hi);
                let g2 = rng.random_range(lo..hi);
                let mut g = [g1, g2, -g1 - g2];
                g.sort_by(f64::total_cmp);
                if g[0] >= lo {
                    return DVector::from_row_slice(&g);
                }
            }
            anchor_point(family, rho)
        }
    }
}

fn sample_points_impl(cs: &ConstraintSet, n: usize, seed: u64, sequential: bool) -> Vec<DVector<f64>> {
    let indices: Vec<u64> = (0..n as u64).collect();
    let draw = |i: &u64| sample_one(cs.family, cs.rho, &mut crate::conditions::derive_stream(seed, *i));
    if sequential {
        par::map_slice_seq(&indices, draw)
    } else {
        par::map_slice_chunked(&indices, draw)
    }
}

/// Draws `n` exactly feasible points, deterministic in `seed` regardless
/// of the thread count.
pub fn sample_points(cs: &ConstraintSet, n: usize, seed: u64) -> Vec<DVector<f64>> {
    sample_points_impl(cs, n, seed, false)
}

fn sampled_impl(
    cs: &ConstraintSet,
    objective: Objective,
    direction: Direction,
    n: usize,
    seed: u64,
    sequential: bool,
) -> Result<SearchResult> {
    if !objective_compatible(objective, cs.family) {
        return Err(CurvError::ObjectiveMismatch {
            objective: objective.label().to_string(),
            family: cs.family.label().to_string(),
        });
    }
    let points = sample_points_impl(cs, n.max(1), seed, sequential);
    let eval = |x: &DVector<f64>| objective.eval(x);
    let values = if sequential {
        par::map_slice_seq(&points, eval)
    } else {
        par::map_slice_chunked(&points, eval)
    };
    let sign = match direction {
        Direction::Max => 1.0,
        Direction::Min => -1.0,
    };
    // polish the handful of best samples; the best polished point wins
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| (sign * values[b]).total_cmp(&(sign * values[a])));
    let q = objective.matrix(points[0].len());
    let chosen: Vec<DVector<f64>> = order.iter().take(6).map(|&i| points[i].clone()).collect();
    let polish = |x0: &DVector<f64>| {
        let x = projected_gradient(&cs.polytope, &q, direction == Direction::Max, x0, 1e-10, 4000);
        (objective.eval(&x), x)
    };
    let polished = if sequential {
        par::map_slice_seq(&chosen, polish)
    } else {
        par::map_slice(&chosen, polish)
    };
    let mut best: Option<(f64, DVector<f64>)> = None;
    for (v, x) in polished {
        if best.as_ref().is_none_or(|(bv, _)| sign * v > sign * bv) {
            best = Some((v, x));
        }
    }
    let (optimum, witness) = best.ok_or(CurvError::Infeasible)?;
    let certificate = cs.polytope.active_labels(&witness, 1e-7 * (1.0 + cs.rho.abs()));
    Ok(SearchResult {
        family: cs.family.label(),
        objective: objective.label(),
        direction,
        optimum,
        witness: witness.iter().copied().collect(),
        method: Method::Sampled,
        certificate,
    })
}

fn objective_compatible(objective: Objective, family: Family) -> bool {
    match objective {
        Objective::GammaNorm => family == Family::KaehlerGamma,
        _ => family != Family::KaehlerGamma,
    }
}

/// Best of `n` seeded feasible samples, followed by projected-gradient
/// polish. Independent of the exact vertex/face route; used to cross-check
/// it. Parallel over samples when the `parallel` feature is on.
pub fn sampled_optimum(
    cs: &ConstraintSet,
    objective: Objective,
    direction: Direction,
    n: usize,
    seed: u64,
) -> Result<SearchResult> {
    sampled_impl(cs, objective, direction, n, seed, false)
}

/// Sequential twin of [`sampled_optimum`]; identical output for a seed.
pub fn sampled_optimum_seq(
    cs: &ConstraintSet,
    objective: Objective,
    direction: Direction,
    n: usize,
    seed: u64,
) -> Result<SearchResult> {
    sampled_impl(cs, objective, direction, n, seed, true)
}

#[cfg(test)]
mod tests {
    use super::super::build_constraints;
    use super::*;

    #[test]
    fn samples_are_feasible_for_every_family() {
        for family in Family::ALL {
            let cs = build_constraints(family, -2.0).unwrap();
            for p in sample_points(&cs, 500, 3) {
                assert!(
                    cs.polytope.is_feasible(&p, 1e-9),
                    "{} sample violates constraints by {:.3e}",
                    family.label(),
                    cs.polytope.violation(&p)
                );
            }
        }
    }

    #[test]
    fn sampled_optimum_approaches_known_bounds() {
        let cs = build_constraints(Family::Nic, -1.0).unwrap();
        let max = sampled_optimum(&cs, Objective::QPlus, Direction::Max, 20_000, 42).unwrap();
        assert!((max.optimum - 3.0).abs() < 1e-6, "got {}", max.optimum);
        assert_eq!(max.method, Method::Sampled);
        let min = sampled_optimum(&cs, Objective::QPlus, Direction::Min, 5_000, 42).unwrap();
        assert!((min.optimum - 1.0 / 3.0).abs() < 1e-6, "got {}", min.optimum);
    }

    #[test]
    fn sequential_twin_is_bit_identical() {
        let cs = build_constraints(Family::KaehlerGamma, -1.0).unwrap();
        let a = sampled_optimum(&cs, Objective::GammaNorm, Direction::Max, 2000, 5).unwrap();
        let b = sampled_optimum_seq(&cs, Objective::GammaNorm, Direction::Max, 2000, 5).unwrap();
        assert_eq!(a.optimum, b.optimum);
        assert_eq!(a.witness, b.witness);
    }
}
