use thiserror::Error;

/// Errors raised by constructions, certifications and bound evaluators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero vector has no norming functional")]
    ZeroVector,

    #[error("exponent p = {0} is not supported here")]
    UnsupportedExponent(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Hadamard order {0} is not available from Sylvester/Kronecker constructions")]
    UnavailableOrder(usize),

    #[error("order {order} exceeds the size guard {limit}")]
    OrderTooLarge { order: usize, limit: usize },

    #[error("matrix is not a Hadamard matrix: {0}")]
    NotHadamard(String),

    #[error("vector {index} is not unit norm (norm = {norm})")]
    NotNormalized { index: usize, norm: f64 },

    #[error("center count {count} exceeds the limit {limit}")]
    CenterOverflow { count: u128, limit: u128 },

    #[error("construction invariant violated: {0}")]
    Construction(String),

    #[error("internal numerical failure: {0}")]
    Numerical(String),

    #[error("dictionary cannot be repaired: {0}")]
    Unrepairable(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
