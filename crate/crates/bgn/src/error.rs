//! Error type shared by all numerical routines in this crate.

use thiserror::Error;

/// Errors produced by special functions, series evaluation, quadrature,
/// and model fitting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error in {func}: {msg}")]
    Domain { func: &'static str, msg: String },

    /// An iteration (series, continued fraction, root finder) hit its
    /// iteration cap before meeting the requested tolerance.
    #[error("{func} did not converge within {iters} iterations")]
    Convergence { func: &'static str, iters: usize },

    /// A series failed its Cauchy/stability check and no trustworthy
    /// resummed value is available.
    #[error("series divergence in {func}: {msg}")]
    SeriesDivergence { func: &'static str, msg: String },

    /// Adaptive quadrature exceeded its refinement depth.
    #[error("quadrature failure: {0}")]
    Quadrature(String),

    /// Data unsuitable for fitting (too short, non-finite, zero variance,
    /// or nonpositive where positivity is required).
    #[error("invalid data: {0}")]
    InvalidData(String),
}

impl Error {
    pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { func, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
