//! Shared test oracles, independent of the library's construction paths.
//!
//! The curvature formulas here are written directly from the defining
//! geometric structures (flat Kaehler structure on R^4 = C^2, metric
//! products of surfaces), so they can vouch for the normal-form builder.

#![allow(dead_code)]

use nalgebra::Matrix4;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use curv4::SingerThorpeSpectrum;

fn kron(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// `omega(a, b) = g(J e_a, e_b)` for the standard complex structure
/// `J e1 = e2, J e2 = -e1, J e3 = e4, J e4 = -e3` (1-based indices).
fn omega(a: usize, b: usize) -> f64 {
    const IMAGE: [usize; 4] = [2, 1, 4, 3];
    const SIGN: [f64; 4] = [1.0, -1.0, 1.0, -1.0];
    SIGN[a - 1] * kron(IMAGE[a - 1], b)
}

/// Curvature component of the complex space form with constant holomorphic
/// sectional curvature `c`, from the standard Kaehler curvature formula.
pub fn complex_space_form_component(c: f64, i: usize, j: usize, k: usize, l: usize) -> f64 {
    0.25 * c
        * (kron(i, k) * kron(j, l) - kron(i, l) * kron(j, k)
            + omega(i, k) * omega(j, l)
            - omega(i, l) * omega(j, k)
            + 2.0 * omega(i, j) * omega(k, l))
}

/// Curvature component of a metric product of two surfaces with constant
/// curvatures `k12` (on span{e1, e2}) and `k34` (on span{e3, e4}). Mixed
/// components vanish.
pub fn surface_product_component(k12: f64, k34: f64, i: usize, j: usize, k: usize, l: usize) -> f64 {
    let first = |a: usize| a <= 2;
    if [i, j, k, l].iter().all(|&a| first(a)) {
        k12 * (kron(i, k) * kron(j, l) - kron(i, l) * kron(j, k))
    } else if [i, j, k, l].iter().all(|&a| !first(a)) {
        k34 * (kron(i, k) * kron(j, l) - kron(i, l) * kron(j, k))
    } else {
        0.0
    }
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.random_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Haar-ish random rotation in SO(4).
pub fn random_rotation(rng: &mut ChaCha8Rng) -> Matrix4<f64> {
    let g = Matrix4::from_fn(|_, _| gaussian(rng));
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

/// Random Einstein spectrum with entries of order one.
pub fn random_spectrum(rng: &mut ChaCha8Rng) -> SingerThorpeSpectrum {
    let lambda = [0; 3].map(|_| rng.random_range(-2.0..1.0));
    let raw_mu = [0; 3].map(|_| rng.random_range(-1.0..1.0f64));
    let mean = raw_mu.iter().sum::<f64>() / 3.0;
    let mu = raw_mu.map(|m| m - mean);
    SingerThorpeSpectrum::from_lambda_mu(lambda, mu).unwrap()
}

/// Random Einstein spectrum with negative Einstein constant.
pub fn random_negative_spectrum(rng: &mut ChaCha8Rng) -> SingerThorpeSpectrum {
    loop {
        let s = random_spectrum(rng);
        if s.rho() < -0.1 {
            return s;
        }
    }
}
