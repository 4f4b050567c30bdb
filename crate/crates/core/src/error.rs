//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by construction and precondition checks.
#[derive(Debug, Error)]
pub enum Error {
    #[error("spectrum must contain at least one singular value")]
    EmptySpectrum,

    #[error("power-law exponent must be positive, got {0}")]
    NonPositiveExponent(f64),

    #[error("singular values must be finite, nonnegative and nonincreasing (offending index {index})")]
    InvalidSpectrum { index: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("cardinality {n} out of range for dimension {dim}")]
    CardinalityOutOfRange { n: usize, dim: usize },

    #[error("spectrum of length {len} too short: cardinality {n} needs at least {needed} values")]
    SpectrumTooShort { len: usize, n: usize, needed: usize },

    #[error("recombination matrix is singular")]
    SingularRecombination,

    #[error("source weights must be strictly positive and finite")]
    NonPositiveWeight,

    #[error("weight exponent must be positive, got {0}")]
    NonPositiveWeightExponent(f64),

    #[error("dimension ladder must be nonempty and strictly increasing")]
    InvalidLadder,

    #[error("functional has a non-finite term (exponent {exponent}, coefficient {coefficient})")]
    NonFiniteTerm { exponent: f64, coefficient: f64 },

    #[error("finite part uses index {0}, but indices are 1-based")]
    ZeroFiniteIndex(usize),

    #[error("l1 norm must be strictly below 1, got {0}")]
    L1NormTooLarge(f64),

    #[error("estimator needs at least {needed} replications, got {got}")]
    TooFewReplications { got: usize, needed: usize },

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { got: usize, needed: usize },

    #[error("need at least one restart")]
    NoRestarts,

    #[error("exact width limited to m <= {limit}, got m = {m}")]
    DimensionLimit { m: usize, limit: usize },

    #[error("cardinality grid must be nonempty and strictly increasing")]
    InvalidGrid,

    #[error("inner-product matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("grid points must be finite and lie in [0, 1]")]
    GridOutOfRange,

    #[error("constraint violated: |residual| = {residual:.3e} exceeds {tol:.3e}")]
    ConstraintViolated { residual: f64, tol: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
