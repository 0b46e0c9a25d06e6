//! Application-level errors with enough structure to map onto exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("empty region: {0}")]
    EmptyRegion(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Numeric(#[from] bgn::Error),

    #[error("no model converged: {0}")]
    NoModelConverged(String),
}

pub type Result<T> = std::result::Result<T, Error>;
