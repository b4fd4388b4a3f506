use thiserror::Error;

/// Errors raised by blochkit operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BlochError {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("dimension mismatch: domain expects {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point lies outside the domain")]
    OutsideDomain,

    #[error("no Bergman metric available for {0}")]
    UnsupportedMetric(String),

    #[error("operation not supported on {0}")]
    Unsupported(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),

    #[error("numerical domain error: {0}")]
    NumericalDomain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, BlochError>;
