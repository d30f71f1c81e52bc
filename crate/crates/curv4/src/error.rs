use thiserror::Error;

/// Errors produced by the curvature algebra.
#[derive(Debug, Error)]
pub enum CurvError {
    #[error("curvature index out of range 1..=4: ({0}, {1}, {2}, {3})")]
    InvalidIndex(usize, usize, usize, usize),

    #[error("non-finite component value at ({i}, {j}, {k}, {l})")]
    NonFiniteValue { i: usize, j: usize, k: usize, l: usize },

    #[error(
        "conflicting entries for slot ({i}, {j}, {k}, {l}) after symmetry mapping: \
         {first} vs {second}"
    )]
    ConflictingEntry { i: usize, j: usize, k: usize, l: usize, first: f64, second: f64 },

    #[error("first Bianchi identity violated (residual {residual:.3e})")]
    BianchiViolation { residual: f64 },

    #[error("invalid Singer-Thorpe spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("tensor is not Einstein: max |Ric - rho*Id| = {deviation:.3e} exceeds {tol:.3e}")]
    NotEinstein { deviation: f64, tol: f64 },

    #[error(
        "operator does not commute with the Hodge star: \
         mixed-block norm {norm:.3e} exceeds {tol:.3e}"
    )]
    NotBlockDiagonal { norm: f64, tol: f64 },

    #[error("operator matrix is not symmetric (defect {0:.3e})")]
    NotSymmetric(f64),

    #[error("complex span is degenerate: the two vectors are Hermitian-linearly dependent")]
    DegenerateSpan,

    #[error("frame is not orthonormal (defect {0:.3e})")]
    NotOrthonormal(f64),

    #[error("invalid gamma triple: {0}")]
    InvalidGamma(String),

    #[error("gamma constraint violated: gamma_1 = {gamma1} is below 2*rho/3 = {bound}")]
    ConstraintViolated { gamma1: f64, bound: f64 },

    #[error("volume must be positive, got {0}")]
    NonpositiveVolume(f64),

    #[error("bad sample weights: {0}")]
    BadWeights(String),

    #[error("rho must be negative, got {0}")]
    InvalidRho(f64),

    #[error("equality classification requires rho < 0, got {0}")]
    NonnegativeRho(f64),

    #[error("objective {objective} is not defined for constraint family {family}")]
    ObjectiveMismatch { objective: String, family: String },

    #[error("feasible set is empty")]
    Infeasible,

    #[error("objective is unbounded over the feasible set")]
    Unbounded,

    #[error("malformed input: {0}")]
    MalformedInput(String),
}

pub type Result<T> = std::result::Result<T, CurvError>;
