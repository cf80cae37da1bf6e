//! Shared error type for the pruning workspace.

use thiserror::Error;

/// Errors surfaced by any layer of the pruning engine.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration value (pruning ratio out of range, zero epochs, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// Invalid argument to an operation (dimension mismatch, bad label, ...).
    #[error("argument error: {0}")]
    Argument(String),

    /// Numerics broke down (non-finite loss or gradient, zero-norm embedding).
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Malformed input file; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A run directory is missing an expected artifact.
    #[error("missing artifact: {0}")]
    Artifact(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
