use thiserror::Error;

/// Errors produced by exact arithmetic and operator evaluation.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(u64, u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("missing pairwise braiding for ({0}, {1})")]
    MissingBraiding(String, String),

    #[error("strand count mismatch: element needs {needed}, sequence has {got}")]
    StrandMismatch { needed: usize, got: usize },

    #[error("braid equation fails on ({0}, {1}, {2})")]
    BraidEquation(String, String, String),

    #[error("braiding not invertible on ({0}, {1})")]
    NotInvertible(String, String),

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("module closure failure: {0}")]
    ClosureFailure(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
