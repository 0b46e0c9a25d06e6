//! SAR intensity modeling workbench built on the `bgn` numerical core:
//! image/list ingestion, descriptive statistics, four-model comparison
//! with information criteria, the Monte Carlo shape-influence study, and
//! sampler validation.

pub mod compare;
pub mod describe;
pub mod mc;
pub mod region;
pub mod report;
pub mod rng_check;

mod error;

pub use error::{Error, Result};
