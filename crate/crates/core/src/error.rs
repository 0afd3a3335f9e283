//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by signal construction, extraction, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on input data was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A run configuration is inconsistent or incomplete.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    /// A file had the wrong shape or an unparsable field.
    #[error("parse error in {path}: {msg}")]
    Parse { path: String, msg: String },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
