use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid forest: {0}")]
    InvalidForest(String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed expression: {0}")]
    Malformed(String),
    #[error("inconsistent system: {0}")]
    Inconsistent(String),
    #[error("series error: {0}")]
    Series(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
