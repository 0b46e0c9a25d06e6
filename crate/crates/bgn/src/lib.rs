//! Beta generalized normal (BGN) distribution and SAR intensity rivals.
//!
//! Numerical core for BGN modeling: a self-contained special-function
//! kernel, the generalized normal sub-model, the five-parameter BGN
//! distribution with a reproducible sampler, series-based moments with a
//! quadrature oracle, maximum-likelihood fitting with the analytic score,
//! and the Γ / K / G⁰ comparison models with information criteria.

mod accel;
mod dist;
mod error;

pub mod gn;
pub mod mle;
pub mod moments;
pub mod quad;
pub mod rivals;
pub mod specfun;

mod optim;

pub use dist::{BgnParams, SampleBatch};
pub use error::{Error, Result};
