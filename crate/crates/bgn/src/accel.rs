//! Sequence acceleration for slowly convergent and Abel-summable series.
//!
//! `levin_u` handles algebraically decaying (or mildly divergent)
//! remainders; `wynn_epsilon` handles mixtures of geometric components,
//! which is what the power-of-incomplete-gamma expansions produce.

/// Outcome of an accelerated summation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct AccelSum {
    pub value: f64,
    /// Difference between the last two stable estimates; `0.0` when the
    /// series terminated exactly.
    pub est_err: f64,
}

/// Levin u-transformation (direct formula, per-stage normalization).
pub(crate) fn levin_u(terms: &[f64]) -> AccelSum {
    let n = terms.len();
    let mut partial = Vec::with_capacity(n);
    let mut acc = 0.0;
    for &t in terms {
        acc += t;
        partial.push(acc);
    }
    let mut best = acc;
    let mut best_err = f64::INFINITY;
    let mut prev: Option<f64> = None;
    for k in 1..n {
        let mut num = 0.0;
        let mut den = 0.0;
        let mut scale = 0.0f64;
        let mut coeffs = Vec::with_capacity(k + 1);
        let mut binom = 1.0f64; // C(k, j), updated incrementally
        for j in 0..=k {
            if terms[j] == 0.0 {
                // exact termination of the underlying series
                return AccelSum { value: partial[j], est_err: 0.0 };
            }
            let omega = (1.0 + j as f64) * terms[j];
            let weight = binom * (1.0 + j as f64).powi(k as i32 - 1);
            let signed = if j % 2 == 0 { weight / omega } else { -weight / omega };
            coeffs.push(signed);
            scale = scale.max(signed.abs());
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
        if scale == 0.0 || !scale.is_finite() {
            break;
        }
        for (j, &c) in coeffs.iter().enumerate() {
            num += (c / scale) * partial[j];
            den += c / scale;
        }
        if den == 0.0 || !num.is_finite() || !den.is_finite() {
            continue;
        }
        let est = num / den;
        if let Some(p) = prev {
            let err = (est - p).abs();
            if err < best_err {
                best = est;
                best_err = err;
            }
        }
        prev = Some(est);
    }
    AccelSum { value: best, est_err: best_err }
}

/// Wynn's epsilon algorithm on the partial sums of `terms`.
///
/// Walks the epsilon table row by row; returns the most stable even-column
/// entry seen (successive-estimate difference as the error proxy).
pub(crate) fn wynn_epsilon(terms: &[f64]) -> AccelSum {
    const HUGE: f64 = 1e290;
    let mut prev_row: Vec<f64> = Vec::new();
    let mut acc = 0.0;
    let mut best: Option<f64> = None;
    let mut best_err = f64::INFINITY;
    let mut last_top: Option<f64> = None;
    for (i, &t) in terms.iter().enumerate() {
        acc += t;
        if t == 0.0 && i > 0 {
            // exactly terminated series: the partial sum is exact
            return AccelSum { value: acc, est_err: 0.0 };
        }
        let mut cur = Vec::with_capacity(i + 1);
        cur.push(acc);
        for j in 1..=i {
            let denom = cur[j - 1] - prev_row[j - 1];
            let val = if denom == 0.0 || !denom.is_finite() {
                HUGE
            } else {
                let base = if j >= 2 { prev_row[j - 2] } else { 0.0 };
                base + 1.0 / denom
            };
            cur.push(val);
        }
        let mut top = cur.len() - 1;
        if top % 2 == 1 {
            top -= 1;
        }
        if top >= 2 {
            let est = cur[top];
            if est.is_finite() {
                if let Some(last) = last_top {
                    let err = (est - last).abs();
                    if err < best_err {
                        best = Some(est);
                        best_err = err;
                    }
                }
                last_top = Some(est);
            }
        }
        prev_row = cur;
    }
    match best {
        Some(value) => AccelSum { value, est_err: best_err },
        None => AccelSum { value: acc, est_err: f64::INFINITY },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levin_sums_alternating_log2() {
        // sum (-1)^{m+1}/m = ln 2
        let terms: Vec<f64> =
            (1..30).map(|m| if m % 2 == 1 { 1.0 / m as f64 } else { -1.0 / m as f64 }).collect();
        let r = levin_u(&terms);
        assert!((r.value - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn levin_antilimit_of_binomial_tail() {
        // sum_m (-1)^m C(1/2, m) = 0, terms decay like m^{-3/2}
        let mut terms = Vec::new();
        let mut c = 1.0;
        terms.push(c);
        for m in 1..60 {
            c *= (0.5 - (m - 1) as f64) / m as f64;
            terms.push(if m % 2 == 0 { c } else { -c });
        }
        let r = levin_u(&terms);
        assert!(r.value.abs() < 1e-8, "got {}", r.value);
    }

    #[test]
    fn epsilon_sums_geometric_mixture() {
        // sum of 2^m - 3^m with alternating sign: Abel value 1/3 - 1/4 = 1/12
        let terms: Vec<f64> = (0..40)
            .map(|m| {
                let sgn = if m % 2 == 0 { 1.0 } else { -1.0 };
                sgn * (2.0f64.powi(m) - 3.0f64.powi(m))
            })
            .collect();
        let r = wynn_epsilon(&terms);
        assert!((r.value - (1.0 / 3.0 - 0.25)).abs() < 1e-9, "got {}", r.value);
    }

    #[test]
    fn epsilon_exact_on_terminating_series() {
        let terms = [1.0, -0.5, 0.25, 0.0, 0.0];
        let r = wynn_epsilon(&terms);
        assert_eq!(r.value, 0.75);
        assert_eq!(r.est_err, 0.0);
    }
}
