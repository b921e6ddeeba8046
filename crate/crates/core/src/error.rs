use thiserror::Error;

/// Errors raised by the distribution engine and its verifiers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("trial count must satisfy n >= {min}, got n = {n}")]
    TrialCount { n: usize, min: usize },

    #[error("psi must lie in [0, 1], got {0}")]
    PsiOutOfRange(f64),

    #[error("omega must be strictly positive and finite, got {0}")]
    OmegaNotPositive(f64),

    #[error("index {index} outside the admissible range [{lo}, {hi}]")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },

    #[error("expected a vector of length {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("{op} requires psi strictly inside (0, 1), got {psi}")]
    DegeneratePsi { op: &'static str, psi: f64 },

    #[error("enumeration oracle refuses n = {n} (limit {limit})")]
    OracleTooLarge { n: usize, limit: usize },

    #[error("{0}")]
    RegimeMismatch(String),

    #[error("probe sequence must move monotonically toward the limit edge: {0}")]
    NonMonotoneProbes(String),

    #[error("variance {0} is not positive; the standardized law is undefined")]
    DegenerateVariance(f64),

    #[error("grid axis {axis} must be non-empty and strictly increasing")]
    InvalidGrid { axis: &'static str },

    #[error("shape parameter {name} must be strictly positive, got {value}")]
    NonPositiveShape { name: &'static str, value: f64 },

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("optimizer failure: {0}")]
    Optimizer(String),
}

pub type Result<T> = std::result::Result<T, Error>;
