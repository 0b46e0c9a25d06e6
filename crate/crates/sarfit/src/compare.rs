//! Four-model comparison: BGN against the gamma, K, and G⁰ rivals, with
//! AIC / AICc / BIC and per-criterion winners.

use serde::Serialize;

use bgn::mle::{fit_bgn, FitOptions};
use bgn::rivals::{criteria, fit_g0, fit_gamma, fit_k, CriteriaTriple};

use crate::describe::{describe, Descriptive};
use crate::error::{Error, Result};
use crate::region::IntensityRegion;

/// Free-parameter counts entering the information criteria.
pub const K_BGN: usize = 5;
pub const K_GAMMA: usize = 2;
pub const K_K: usize = 3;
pub const K_G0: usize = 3;

#[derive(Debug, Clone, Serialize)]
pub struct ModelReport {
    pub name: String,
    pub params: Vec<(String, f64)>,
    pub loglik: f64,
    pub k_params: usize,
    pub converged: bool,
    pub aic: f64,
    pub aicc: Option<f64>,
    pub bic: f64,
}

impl ModelReport {
    pub fn criteria(&self) -> CriteriaTriple {
        CriteriaTriple { aic: self.aic, aicc: self.aicc, bic: self.bic }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub n: usize,
    pub descriptive: Descriptive,
    pub models: Vec<ModelReport>,
    /// criterion name -> winning model name, minimal value among
    /// converged models
    pub winner_by: Vec<(String, String)>,
}

/// Fit all four models and assemble the comparison. Per-model
/// non-convergence is recorded, not fatal; fails only when no model
/// converges.
pub fn compare(region: &IntensityRegion, opts: &FitOptions) -> Result<ComparisonReport> {
    let data = &region.values;
    if data.len() < 30 {
        return Err(Error::Numeric(bgn::Error::InvalidData(format!(
            "compare needs >= 30 samples, got {}",
            data.len()
        ))));
    }
    let n = data.len();
    let descriptive = describe(region)?;

    // the four fits are independent; BGN parallelizes internally, the
    // rivals pair off here
    let (bgn_fit, (gamma_fit, (k_fit, g0_fit))) = rayon::join(
        || fit_bgn(data, opts),
        || {
            rayon::join(
                || fit_gamma(data, opts),
                || rayon::join(|| fit_k(data, opts), || fit_g0(data, opts)),
            )
        },
    );

    let mut models = Vec::with_capacity(4);
    match bgn_fit {
        Ok(r) => {
            let c = criteria(r.loglik, K_BGN, n);
            models.push(ModelReport {
                name: "BGN".into(),
                params: vec![
                    ("alpha".into(), r.params.alpha),
                    ("beta".into(), r.params.beta),
                    ("mu".into(), r.params.mu),
                    ("sigma".into(), r.params.sigma),
                    ("s".into(), r.params.s),
                ],
                loglik: r.loglik,
                k_params: K_BGN,
                converged: r.converged,
                aic: c.aic,
                aicc: c.aicc,
                bic: c.bic,
            });
        }
        Err(e) => models.push(failed_model("BGN", K_BGN, &e)),
    }
    match gamma_fit {
        Ok(r) => {
            let c = criteria(r.loglik, K_GAMMA, n);
            models.push(ModelReport {
                name: "Gamma".into(),
                params: vec![("shape".into(), r.params.shape), ("rate".into(), r.params.rate)],
                loglik: r.loglik,
                k_params: K_GAMMA,
                converged: r.converged,
                aic: c.aic,
                aicc: c.aicc,
                bic: c.bic,
            });
        }
        Err(e) => models.push(failed_model("Gamma", K_GAMMA, &e)),
    }
    match k_fit {
        Ok(r) => {
            let c = criteria(r.loglik, K_K, n);
            models.push(ModelReport {
                name: "K".into(),
                params: vec![
                    ("alpha_k".into(), r.params.alpha_k),
                    ("looks".into(), r.params.looks),
                    ("mean_intensity".into(), r.params.mean_intensity),
                ],
                loglik: r.loglik,
                k_params: K_K,
                converged: r.converged,
                aic: c.aic,
                aicc: c.aicc,
                bic: c.bic,
            });
        }
        Err(e) => models.push(failed_model("K", K_K, &e)),
    }
    match g0_fit {
        Ok(r) => {
            let c = criteria(r.loglik, K_G0, n);
            models.push(ModelReport {
                name: "G0".into(),
                params: vec![
                    ("alpha_g".into(), r.params.alpha_g),
                    ("gamma_g".into(), r.params.gamma_g),
                    ("looks".into(), r.params.looks),
                ],
                loglik: r.loglik,
                k_params: K_G0,
                converged: r.converged,
                aic: c.aic,
                aicc: c.aicc,
                bic: c.bic,
            });
        }
        Err(e) => models.push(failed_model("G0", K_G0, &e)),
    }

    if !models.iter().any(|m| m.converged) {
        return Err(Error::NoModelConverged(format!(
            "all four fits failed to converge on {} samples",
            n
        )));
    }

    let winner_by = winners(&models);
    Ok(ComparisonReport { n, descriptive, models, winner_by })
}

fn failed_model(name: &str, k: usize, err: &bgn::Error) -> ModelReport {
    ModelReport {
        name: format!("{name} (fit error: {err})"),
        params: Vec::new(),
        loglik: f64::NAN,
        k_params: k,
        converged: false,
        aic: f64::NAN,
        aicc: None,
        bic: f64::NAN,
    }
}

fn winners(models: &[ModelReport]) -> Vec<(String, String)> {
    let mut out = Vec::new();
    let pick = |get: &dyn Fn(&ModelReport) -> Option<f64>| -> Option<String> {
        let mut best: Option<(&ModelReport, f64)> = None;
        for m in models.iter().filter(|m| m.converged) {
            if let Some(v) = get(m) {
                if v.is_finite() && best.map_or(true, |(_, bv)| v < bv) {
                    best = Some((m, v));
                }
            }
        }
        best.map(|(m, _)| m.name.clone())
    };
    if let Some(w) = pick(&|m| Some(m.aic)) {
        out.push(("aic".to_string(), w));
    }
    if let Some(w) = pick(&|m| m.aicc) {
        out.push(("aicc".to_string(), w));
    }
    if let Some(w) = pick(&|m| Some(m.bic)) {
        out.push(("bic".to_string(), w));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use bgn::BgnParams;

    fn region(values: Vec<f64>) -> IntensityRegion {
        IntensityRegion {
            values,
            source: "synthetic".into(),
            channel: "HH".into(),
            rect: None,
            rejected: 0,
        }
    }

    #[test]
    fn rejects_short_regions() {
        assert!(compare(&region(vec![1.0; 10]), &FitOptions::default()).is_err());
    }

    #[test]
    fn winners_are_minimal_and_criteria_recompute() {
        // positive-valued BGN sample keeps all four models applicable
        let truth = BgnParams::new(2.0, 1.5, 4.0, 1.0, 2.0).unwrap();
        let data: Vec<f64> =
            truth.sample(800, 7).values.into_iter().filter(|v| *v > 0.0).collect();
        let r = compare(&region(data), &FitOptions { n_starts: 2, ..Default::default() })
            .unwrap();
        assert_eq!(r.models.len(), 4);
        for m in &r.models {
            if m.converged {
                let c = criteria(m.loglik, m.k_params, r.n);
                assert_eq!(c.aic, m.aic);
                assert_eq!(c.bic, m.bic);
                assert_eq!(c.aicc, m.aicc);
            }
        }
        for (crit, win) in &r.winner_by {
            let winner_val = |m: &ModelReport| match crit.as_str() {
                "aic" => Some(m.aic),
                "bic" => Some(m.bic),
                _ => m.aicc,
            };
            let w = r.models.iter().find(|m| &m.name == win).unwrap();
            for m in r.models.iter().filter(|m| m.converged) {
                if let (Some(a), Some(b)) = (winner_val(w), winner_val(m)) {
                    assert!(a <= b, "{crit}: {} not minimal", win);
                }
            }
        }
    }
}
