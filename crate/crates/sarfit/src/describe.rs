//! Descriptive statistics: mean, median, sample standard deviation, and
//! the coefficient of variation in percent.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::region::IntensityRegion;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Descriptive {
    pub mean: f64,
    pub median: f64,
    pub sd: f64,
    /// 100 * sd / mean, matching the percent scale of SAR reports.
    pub cv: f64,
}

pub fn describe(region: &IntensityRegion) -> Result<Descriptive> {
    let v = &region.values;
    if v.is_empty() {
        return Err(Error::EmptyRegion("describe needs a nonempty region".into()));
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let mut sorted = v.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // midpoint convention for even n
    let median = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
    };
    let sd = if v.len() > 1 {
        (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let cv = if sd == 0.0 { 0.0 } else { 100.0 * sd / mean };
    Ok(Descriptive { mean, median, sd, cv })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn region(values: Vec<f64>) -> IntensityRegion {
        IntensityRegion {
            values,
            source: "test".into(),
            channel: "HH".into(),
            rect: None,
            rejected: 0,
        }
    }

    #[test]
    fn hand_arithmetic() {
        let d = describe(&region(vec![1.0, 2.0, 3.0, 4.0])).unwrap();
        assert_eq!(d.mean, 2.5);
        assert_eq!(d.median, 2.5);
        assert!((d.sd - 1.2909944487358056).abs() < 1e-12);
        assert!((d.cv - 51.63977794943222).abs() < 1e-10);
    }

    #[test]
    fn constant_region() {
        let d = describe(&region(vec![7.0; 5])).unwrap();
        assert_eq!(d.sd, 0.0);
        assert_eq!(d.cv, 0.0);
        assert_eq!(d.median, 7.0);
    }

    #[test]
    fn percent_convention_matches_reported_scale() {
        // mean 45.42e-3 with sd 1.96e-2 gives cv near 43.15 percent
        let cv: f64 = 100.0 * 1.96e-2 / 45.42e-3;
        assert!((cv - 43.15).abs() < 0.01, "cv = {cv}");
    }

    #[test]
    fn matches_naive_reference_on_random_inputs() {
        // deterministic xorshift-style stream, 200 random datasets
        let mut state = 0x1234_5678_9abc_def0u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for trial in 0..200 {
            let n = 1 + (trial % 37);
            let values: Vec<f64> = (0..n).map(|_| 1e-3 + next() * 10.0).collect();
            let d = describe(&region(values.clone())).unwrap();

            // naive reference
            let nf = values.len() as f64;
            let mean: f64 = values.iter().sum::<f64>() / nf;
            let mut s = values.clone();
            s.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let median = if s.len() % 2 == 1 {
                s[s.len() / 2]
            } else {
                (s[s.len() / 2 - 1] + s[s.len() / 2]) / 2.0
            };
            let sd = if values.len() > 1 {
                (values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0)).sqrt()
            } else {
                0.0
            };
            assert!((d.mean - mean).abs() <= 1e-12 * mean.abs().max(1.0));
            assert!((d.median - median).abs() <= 1e-12);
            assert!((d.sd - sd).abs() <= 1e-12 * sd.abs().max(1.0));
            if sd > 0.0 {
                assert!((d.cv - 100.0 * sd / mean).abs() <= 1e-12 * d.cv.abs().max(1.0));
            }
        }
    }
}
