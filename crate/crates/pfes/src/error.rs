//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PfesError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("kernel matrix is singular after jitter escalation ({0})")]
    SingularKernel(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("pool schema error at data row {row}: {message}")]
    PoolSchema { row: usize, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, PfesError>;
