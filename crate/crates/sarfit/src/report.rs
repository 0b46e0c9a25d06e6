//! Rendering: aligned plain text for humans, JSON for machines.
//! Numbers print with six significant digits; criteria with two decimals.

use crate::compare::ComparisonReport;
use crate::describe::Descriptive;
use crate::mc::McRow;
use crate::rng_check::RngCheck;

pub fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = (5 - mag).clamp(0, 17) as usize;
    format!("{v:.decimals$}")
}

pub fn descriptive_text(d: &Descriptive) -> String {
    format!(
        "n/a\nmean   {}\nmedian {}\nsd     {}\ncv%    {}\n",
        sig6(d.mean),
        sig6(d.median),
        sig6(d.sd),
        sig6(d.cv)
    )
    .replace("n/a\n", "")
}

pub fn comparison_text(r: &ComparisonReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("n = {}\n", r.n));
    out.push_str(&format!(
        "mean {}  median {}  sd {}  cv% {}\n\n",
        sig6(r.descriptive.mean),
        sig6(r.descriptive.median),
        sig6(r.descriptive.sd),
        sig6(r.descriptive.cv)
    ));
    out.push_str(&format!(
        "{:<28} {:>4} {:>14} {:>12} {:>12} {:>12}  conv\n",
        "model", "k", "loglik", "AIC", "AICc", "BIC"
    ));
    for m in &r.models {
        let aicc = m.aicc.map_or("undefined".to_string(), |v| format!("{v:.2}"));
        out.push_str(&format!(
            "{:<28} {:>4} {:>14} {:>12.2} {:>12} {:>12.2}  {}\n",
            m.name,
            m.k_params,
            sig6(m.loglik),
            m.aic,
            aicc,
            m.bic,
            if m.converged { "yes" } else { "no" }
        ));
    }
    out.push('\n');
    for (crit, winner) in &r.winner_by {
        out.push_str(&format!("best by {crit:<5} {winner}\n"));
    }
    for m in &r.models {
        if !m.params.is_empty() {
            let ps: Vec<String> =
                m.params.iter().map(|(k, v)| format!("{k}={}", sig6(*v))).collect();
            out.push_str(&format!("{:<28} {}\n", m.name, ps.join("  ")));
        }
    }
    out
}

pub fn mc_rows_text(rows: &[McRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<10} {:>12} {:>12} {:>14} {:>10} {:>10}\n",
        "scenario", "value", "n", "mse", "reps", "excluded"
    ));
    for r in rows {
        out.push_str(&format!(
            "{:<10} {:>12} {:>12} {:>14} {:>10} {:>10}\n",
            r.scenario.name(),
            sig6(r.sweep_value),
            r.sample_size,
            sig6(r.mse),
            r.replications,
            r.excluded
        ));
    }
    out
}

pub fn rng_check_text(r: &RngCheck) -> String {
    let mut out = format!("ks_stat {}\n", sig6(r.ks_stat));
    out.push_str(&format!(
        "{:>14} {:>14} {:>14} {:>14}\n",
        "center", "width", "empirical", "model"
    ));
    for (bin, model) in r.histogram.iter().zip(&r.density_curve) {
        out.push_str(&format!(
            "{:>14} {:>14} {:>14} {:>14}\n",
            sig6(bin.center),
            sig6(bin.width),
            sig6(bin.density),
            sig6(*model)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_formats() {
        assert_eq!(sig6(45.42e-3), "0.0454200");
        assert_eq!(sig6(1.0), "1.00000");
        assert_eq!(sig6(123456.7), "123457");
        assert_eq!(sig6(0.0), "0");
    }
}
