use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range (expected 1..={len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid cost: {0}")]
    InvalidCost(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("weight {0} is not a positive integer")]
    NonIntegerWeight(String),

    #[error("row counts differ: {left} vs {right}")]
    RowCountMismatch { left: usize, right: usize },

    #[error("marginals are not equal: {0}")]
    MarginalMismatch(String),

    #[error("rounding cannot preserve positivity (positivity margin {margin:e}, eps {eps:e})")]
    Positivity { margin: f64, eps: f64 },

    #[error("resource guard exceeded: {what} requires {requested}, limit is {limit}")]
    Guard {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("format: {0}")]
    Format(String),
}

impl Error {
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::Guard { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
