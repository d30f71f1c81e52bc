//! Pointwise curvature algebra for oriented Einstein 4-manifolds.
//!
//! The crate models the curvature of a 4-manifold at a point: algebraic
//! curvature tensors with their index symmetries, the induced operator on
//! 2-forms with its self-dual/anti-self-dual splitting, the Singer-Thorpe
//! normal form of the Einstein case, complex sectional and isotropic
//! curvature, Gauss-Bonnet and signature densities, and the inequalities
//! relating them under nonpositive isotropic curvature, nonpositive
//! curvature operator and sectional pinching. An extremal module
//! re-derives each pointwise bound as the exact optimum of a quadratic
//! form over a constraint polytope in spectrum space.
//!
//! Conventions, fixed everywhere:
//!
//! * `R_{ijij}` is the sectional curvature of `span{e_i, e_j}` with the
//!   round sphere positive, so the hyperbolic models have `rho < 0`;
//! * the self-dual basis is `w1± = (e1^e2 ± e3^e4)/sqrt(2)` and cyclic,
//!   orthonormal with the listed ordering;
//! * ascending self-dual block eigenvalues pair with ascending
//!   anti-self-dual ones;
//! * the classical 4-term isotropic frame sum equals `4 K(pi)`.
//!
//! All values are immutable after construction and every operation is a
//! pure function, so everything is safe to share across threads. Scans
//! over samples run on rayon under the default `parallel` feature and
//! sequentially without it; `*_seq` twins are always sequential.

// `!(x > 0.0)`-style guards are deliberate: they reject NaN along with the
// out-of-range values. Indexed loops are the natural shape of the tensor
// contractions.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod conditions;
pub mod error;
pub mod extremal;
pub mod invariants;
pub mod json;
pub mod models;
pub mod operator;
pub(crate) mod par;
pub mod spectrum;
pub mod tensor;

pub use error::{CurvError, Result};
pub use operator::{decompose, Basis, CurvatureOperator, DecompositionReport, WeylPair};
pub use spectrum::SingerThorpeSpectrum;
pub use tensor::CurvatureTensor;
