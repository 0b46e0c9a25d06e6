//! Sampler validation: Kolmogorov-Smirnov distance against the BGN cdf
//! plus histogram/density-curve data for external plotting.

use serde::Serialize;

use bgn::BgnParams;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistogramBin {
    pub center: f64,
    pub width: f64,
    /// Normalized so the bins integrate to one.
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RngCheck {
    pub ks_stat: f64,
    pub histogram: Vec<HistogramBin>,
    /// BGN density at the bin centers.
    pub density_curve: Vec<f64>,
}

/// Supremum distance between the empirical cdf of pre-sorted data and `cdf`.
pub fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i as f64 + 1.0) / n - f);
    }
    d
}

pub fn rng_check(p: &BgnParams, n: usize, bins: usize, seed: u64) -> Result<RngCheck> {
    if n < 1000 {
        return Err(Error::Numeric(bgn::Error::InvalidData(format!(
            "rng_check needs n >= 1000, got {n}"
        ))));
    }
    if bins == 0 {
        return Err(Error::Numeric(bgn::Error::InvalidData("bins must be >= 1".into())));
    }
    let mut values = p.sample(n, seed).values;
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let ks_stat = ks_statistic(&values, |x| p.cdf(x));

    let lo = values[0];
    let hi = values[values.len() - 1];
    let width = ((hi - lo) / bins as f64).max(f64::MIN_POSITIVE);
    let mut counts = vec![0usize; bins];
    for &v in &values {
        let idx = (((v - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let histogram: Vec<HistogramBin> = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| HistogramBin {
            center: lo + (i as f64 + 0.5) * width,
            width,
            density: c as f64 / (n as f64 * width),
        })
        .collect();
    let density_curve = histogram.iter().map(|b| p.pdf(b.center)).collect();
    Ok(RngCheck { ks_stat, histogram, density_curve })
}
