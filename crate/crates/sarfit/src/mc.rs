//! Monte Carlo influence study: sample, fit, and accumulate the
//! integrated squared error between true and fitted densities.
//!
//! Replications run in parallel on deterministic per-replication streams
//! keyed by (seed, scenario, sweep index, size index, replication index),
//! so the output is identical for any worker count.

use rayon::prelude::*;
use serde::Serialize;

use bgn::mle::{fit_bgn, FitOptions, FitResult};
use bgn::BgnParams;

use crate::error::{Error, Result};

/// Which shape parameter the sweep varies; the other two stay at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Scenario {
    VaryS,
    VaryBeta,
    VaryAlpha,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::VaryS => "s",
            Scenario::VaryBeta => "beta",
            Scenario::VaryAlpha => "alpha",
        }
    }

    fn params(&self, base: &BgnParams, value: f64) -> BgnParams {
        match self {
            Scenario::VaryS => BgnParams { alpha: 1.0, beta: 1.0, s: value, ..*base },
            Scenario::VaryBeta => BgnParams { alpha: 1.0, beta: value, s: 1.0, ..*base },
            Scenario::VaryAlpha => BgnParams { alpha: value, beta: 1.0, s: 1.0, ..*base },
        }
    }

    fn index(&self) -> u64 {
        match self {
            Scenario::VaryS => 0,
            Scenario::VaryBeta => 1,
            Scenario::VaryAlpha => 2,
        }
    }
}

/// Study configuration. `base` supplies location and dispersion; the
/// scenario overrides the shape parameters.
#[derive(Debug, Clone)]
pub struct McConfig {
    pub replications: usize,
    pub sample_sizes: Vec<usize>,
    pub scenario: Scenario,
    pub sweep: Vec<f64>,
    pub base: BgnParams,
    pub grid_points: usize,
    pub seed: u64,
    pub fit: FitOptions,
}

impl McConfig {
    fn validate(&self) -> Result<()> {
        if self.replications == 0 || self.sample_sizes.is_empty() || self.sweep.is_empty() {
            return Err(Error::Numeric(bgn::Error::InvalidData(
                "replications, sample_sizes and sweep must be nonempty".into(),
            )));
        }
        if self.sweep.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::Numeric(bgn::Error::InvalidData(
                "sweep values must be positive".into(),
            )));
        }
        if self.grid_points < 2 {
            return Err(Error::Numeric(bgn::Error::InvalidData(
                "grid_points must be >= 2".into(),
            )));
        }
        Ok(())
    }
}

/// One output row: mean integrated squared error between true and fitted
/// densities for a (sweep value, sample size) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McRow {
    pub scenario: Scenario,
    pub sweep_value: f64,
    pub sample_size: usize,
    pub mse: f64,
    pub replications: usize,
    /// Replications dropped because the fit did not converge.
    pub excluded: usize,
}

/// splitmix64 step, used to derive independent stream seeds.
fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn stream_seed(seed: u64, tags: &[u64]) -> u64 {
    let mut state = splitmix64(seed);
    for &t in tags {
        state = splitmix64(state ^ splitmix64(t));
    }
    state
}

/// Integrated squared error between two densities on a uniform grid over
/// the central mass of the true distribution, trapezoidal weights.
pub fn integrated_squared_error(
    truth: &BgnParams,
    fitted: &BgnParams,
    grid_points: usize,
) -> Result<f64> {
    let lo = truth.quantile(0.001)?;
    let hi = truth.quantile(0.999)?;
    let m = grid_points.max(2);
    let h = (hi - lo) / (m - 1) as f64;
    let mut total = 0.0;
    for i in 0..m {
        let x = lo + i as f64 * h;
        let d = fitted.pdf(x) - truth.pdf(x);
        let w = if i == 0 || i + 1 == m { 0.5 } else { 1.0 };
        total += w * d * d;
    }
    Ok(total * h)
}

/// The study with the production fitter.
pub fn mc_study(cfg: &McConfig) -> Result<Vec<McRow>> {
    mc_study_with(cfg, |data, opts| fit_bgn(data, opts))
}

/// The study with a caller-supplied estimator (exercised directly by
/// tests; also usable with restricted or alternative fitters).
pub fn mc_study_with<F>(cfg: &McConfig, fitter: F) -> Result<Vec<McRow>>
where
    F: Fn(&[f64], &FitOptions) -> bgn::Result<FitResult> + Sync,
{
    cfg.validate()?;
    struct Job {
        si: usize,
        ni: usize,
        rep: usize,
        truth: BgnParams,
        n: usize,
    }
    let mut jobs = Vec::new();
    for (si, &value) in cfg.sweep.iter().enumerate() {
        let truth = cfg.scenario.params(&cfg.base, value);
        for (ni, &n) in cfg.sample_sizes.iter().enumerate() {
            for rep in 0..cfg.replications {
                jobs.push(Job { si, ni, rep, truth, n });
            }
        }
    }

    let outcomes: Vec<(usize, usize, Option<f64>)> = jobs
        .par_iter()
        .map(|job| {
            let seed = stream_seed(
                cfg.seed,
                &[cfg.scenario.index(), job.si as u64, job.ni as u64, job.rep as u64],
            );
            let data = job.truth.sample(job.n, seed).values;
            let ise = match fitter(&data, &cfg.fit) {
                Ok(fit) if fit.converged => {
                    integrated_squared_error(&job.truth, &fit.params, cfg.grid_points).ok()
                }
                _ => None,
            };
            (job.si, job.ni, ise)
        })
        .collect();

    let mut rows = Vec::new();
    for (si, &value) in cfg.sweep.iter().enumerate() {
        for (ni, &n) in cfg.sample_sizes.iter().enumerate() {
            let cell: Vec<&Option<f64>> = outcomes
                .iter()
                .filter(|(s, m, _)| *s == si && *m == ni)
                .map(|(_, _, v)| v)
                .collect();
            let used: Vec<f64> = cell.iter().filter_map(|v| **v).collect();
            let excluded = cell.len() - used.len();
            let mse = if used.is_empty() {
                f64::NAN
            } else {
                used.iter().sum::<f64>() / used.len() as f64
            };
            rows.push(McRow {
                scenario: cfg.scenario,
                sweep_value: value,
                sample_size: n,
                mse,
                replications: cfg.replications,
                excluded,
            });
        }
    }
    Ok(rows)
}

/// Parse a sweep specification `lo:hi:step` into the inclusive grid.
pub fn parse_sweep(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let err = || {
        Error::Numeric(bgn::Error::InvalidData(format!(
            "sweep must be lo:hi:step, got {spec:?}"
        )))
    };
    if parts.len() != 3 {
        return Err(err());
    }
    let lo: f64 = parts[0].parse().map_err(|_| err())?;
    let hi: f64 = parts[1].parse().map_err(|_| err())?;
    let step: f64 = parts[2].parse().map_err(|_| err())?;
    if !(step > 0.0) || hi < lo {
        return Err(err());
    }
    let mut out = Vec::new();
    let mut v = lo;
    let mut k = 0usize;
    while v <= hi + 1e-9 * step {
        out.push(v);
        k += 1;
        v = lo + k as f64 * step;
    }
    Ok(out)
}
