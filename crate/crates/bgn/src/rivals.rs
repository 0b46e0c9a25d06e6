//! Comparison models for SAR intensity data: gamma, K, and G⁰, each with
//! maximum-likelihood fitting in log-parameter space (numerical
//! gradients), plus the AIC / AICc / BIC criteria.
//!
//! Densities use the canonical single-channel intensity forms: the K
//! model in its (texture shape, looks, mean intensity) parameterization
//! and G⁰ in (roughness α < 0, scale γ, looks). The equivalent number of
//! looks is treated as a free positive real.

use crate::error::{Error, Result};
use crate::mle::FitOptions;
use crate::optim;
use crate::specfun::{ln_bessel_k, ln_gamma_raw};

/// Gamma intensity model in the rate form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams {
    pub shape: f64,
    pub rate: f64,
}

/// K intensity model: gamma texture times gamma speckle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KParams {
    pub alpha_k: f64,
    pub looks: f64,
    pub mean_intensity: f64,
}

/// G⁰ intensity model: inverse-gamma texture times gamma speckle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct G0Params {
    pub alpha_g: f64,
    pub gamma_g: f64,
    pub looks: f64,
}

/// Penalized-likelihood criteria; `aicc` is undefined when `n <= k + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriteriaTriple {
    pub aic: f64,
    pub aicc: Option<f64>,
    pub bic: f64,
}

/// A fitted rival model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RivalFit<P> {
    pub params: P,
    pub loglik: f64,
    pub converged: bool,
    pub iterations: usize,
    pub grad_norm: f64,
}

impl GammaParams {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        for (name, v) in [("shape", shape), ("rate", rate)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain("GammaParams", format!("{name} = {v}, need > 0")));
            }
        }
        Ok(GammaParams { shape, rate })
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        check_positive_x("gamma_pdf", x)?;
        Ok(self.ln_pdf(x).exp())
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        self.shape * self.rate.ln() + (self.shape - 1.0) * x.ln()
            - self.rate * x
            - ln_gamma_raw(self.shape)
    }
}

impl KParams {
    pub fn new(alpha_k: f64, looks: f64, mean_intensity: f64) -> Result<Self> {
        for (name, v) in
            [("alpha_k", alpha_k), ("looks", looks), ("mean_intensity", mean_intensity)]
        {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain("KParams", format!("{name} = {v}, need > 0")));
            }
        }
        Ok(KParams { alpha_k, looks, mean_intensity })
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        check_positive_x("k_pdf", x)?;
        Ok(self.ln_pdf(x).exp())
    }

    /// `ln f(x)` with the Bessel factor evaluated in log space.
    pub fn ln_pdf(&self, x: f64) -> f64 {
        let (a, l, m) = (self.alpha_k, self.looks, self.mean_intensity);
        let half = 0.5 * (a + l);
        let arg = 2.0 * (a * l * x / m).sqrt();
        let lnk = match ln_bessel_k(a - l, arg) {
            Ok(v) => v,
            Err(_) => return f64::NEG_INFINITY,
        };
        std::f64::consts::LN_2 - ln_gamma_raw(a) - ln_gamma_raw(l)
            + half * (a * l / m).ln()
            + (half - 1.0) * x.ln()
            + lnk
    }
}

impl G0Params {
    pub fn new(alpha_g: f64, gamma_g: f64, looks: f64) -> Result<Self> {
        if !(alpha_g < 0.0) || !alpha_g.is_finite() {
            return Err(Error::domain("G0Params", format!("alpha_g = {alpha_g}, need < 0")));
        }
        for (name, v) in [("gamma_g", gamma_g), ("looks", looks)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain("G0Params", format!("{name} = {v}, need > 0")));
            }
        }
        Ok(G0Params { alpha_g, gamma_g, looks })
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        check_positive_x("g0_pdf", x)?;
        Ok(self.ln_pdf(x).exp())
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        let (a, g, l) = (self.alpha_g, self.gamma_g, self.looks);
        l * l.ln() + ln_gamma_raw(l - a) - a * g.ln() - ln_gamma_raw(l) - ln_gamma_raw(-a)
            + (l - 1.0) * x.ln()
            - (l - a) * (g + l * x).ln()
    }
}

fn check_positive_x(func: &'static str, x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(func, format!("x = {x}, need x > 0")));
    }
    Ok(())
}

/// `aic = 2k - 2ℓ`, `aicc = aic + 2k(k+1)/(n-k-1)`, `bic = k ln n - 2ℓ`.
pub fn criteria(loglik: f64, k_params: usize, n: usize) -> CriteriaTriple {
    let k = k_params as f64;
    let aic = 2.0 * k - 2.0 * loglik;
    let aicc = if n > k_params + 1 {
        Some(aic + 2.0 * k * (k + 1.0) / (n as f64 - k - 1.0))
    } else {
        None
    };
    CriteriaTriple { aic, aicc, bic: k * (n as f64).ln() - 2.0 * loglik }
}

struct SufficientStats {
    n: f64,
    sum: f64,
    sum_ln: f64,
    mean: f64,
    var: f64,
}

fn positive_data_stats(data: &[f64]) -> Result<SufficientStats> {
    if data.len() < 10 {
        return Err(Error::InvalidData(format!("need >= 10 observations, got {}", data.len())));
    }
    for &x in data {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::InvalidData(format!("nonpositive or non-finite value {x}")));
        }
    }
    let n = data.len() as f64;
    let sum: f64 = data.iter().sum();
    let sum_ln: f64 = data.iter().map(|v| v.ln()).sum();
    let mean = sum / n;
    let var = data.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    if var == 0.0 {
        return Err(Error::InvalidData("zero variance".into()));
    }
    Ok(SufficientStats { n, sum, sum_ln, mean, var })
}

/// Generic log-parameter maximization with central-difference gradients.
fn fit_numeric<F>(
    objective: F,
    t0: Vec<f64>,
    opts: &FitOptions,
    n_obs: f64,
    bound: f64,
) -> (Vec<f64>, f64, bool, usize, f64)
where
    F: Fn(&[f64]) -> f64 + Copy,
{
    let grad = move |t: &[f64]| {
        let mut g = Vec::with_capacity(t.len());
        let mut tp = t.to_vec();
        for i in 0..t.len() {
            let h = 3e-6;
            tp[i] = t[i] + h;
            let up = objective(&tp);
            tp[i] = t[i] - h;
            let dn = objective(&tp);
            tp[i] = t[i];
            if !up.is_finite() || !dn.is_finite() {
                return None;
            }
            g.push((up - dn) / (2.0 * h));
        }
        Some(g)
    };
    let r = optim::maximize(
        objective,
        grad,
        &t0,
        &optim::Options {
            max_iter: opts.max_iter,
            grad_tol: opts.grad_tol,
            grad_scale: n_obs,
            bound,
            f_tol: 0.0,
        },
    );
    (r.x, r.value, r.converged, r.iterations, r.grad_norm)
}

/// ML fit of the gamma model (2 free parameters, log space).
pub fn fit_gamma(data: &[f64], opts: &FitOptions) -> Result<RivalFit<GammaParams>> {
    let st = positive_data_stats(data)?;
    let (n, sum, sum_ln) = (st.n, st.sum, st.sum_ln);
    let objective = move |t: &[f64]| {
        let shape = t[0].exp();
        let rate = t[1].exp();
        n * (shape * rate.ln() - ln_gamma_raw(shape)) + (shape - 1.0) * sum_ln - rate * sum
    };
    let shape0 = (st.mean * st.mean / st.var).clamp(1e-3, 1e6);
    let t0 = vec![shape0.ln(), (shape0 / st.mean).ln()];
    let (t, value, converged, iterations, grad_norm) = fit_numeric(objective, t0, opts, n, 30.0);
    Ok(RivalFit {
        params: GammaParams { shape: t[0].exp(), rate: t[1].exp() },
        loglik: value,
        converged,
        iterations,
        grad_norm,
    })
}

/// ML fit of the K model (3 free parameters, log space).
pub fn fit_k(data: &[f64], opts: &FitOptions) -> Result<RivalFit<KParams>> {
    let st = positive_data_stats(data)?;
    let n = st.n;
    let objective = move |t: &[f64]| {
        let p = KParams { alpha_k: t[0].exp(), looks: t[1].exp(), mean_intensity: t[2].exp() };
        data.iter().map(|&x| p.ln_pdf(x)).sum::<f64>()
    };
    // moment start: CV² = (1 + 1/α)(1 + 1/L) - 1 with α = L
    let cv2 = st.var / (st.mean * st.mean);
    let a0 = (1.0 / ((cv2 + 1.0).sqrt() - 1.0).max(1e-3)).clamp(0.2, 50.0);
    let t0 = vec![a0.ln(), a0.ln(), st.mean.ln()];
    // the Bessel order recurrence makes very large shape parameters
    // expensive; the box keeps them physical
    let (t, value, converged, iterations, grad_norm) = fit_numeric(objective, t0, opts, n, 7.0);
    Ok(RivalFit {
        params: KParams {
            alpha_k: t[0].exp(),
            looks: t[1].exp(),
            mean_intensity: t[2].exp(),
        },
        loglik: value,
        converged,
        iterations,
        grad_norm,
    })
}

/// ML fit of the G⁰ model (3 free parameters; `alpha_g = -exp(t)` keeps
/// the roughness negative).
pub fn fit_g0(data: &[f64], opts: &FitOptions) -> Result<RivalFit<G0Params>> {
    let st = positive_data_stats(data)?;
    let n = st.n;
    let objective = move |t: &[f64]| {
        let p = G0Params { alpha_g: -t[0].exp(), gamma_g: t[1].exp(), looks: t[2].exp() };
        data.iter().map(|&x| p.ln_pdf(x)).sum::<f64>()
    };
    let a0: f64 = 3.0;
    let l0 = (1.0 / (st.var / (st.mean * st.mean))).clamp(0.3, 50.0);
    let t0 = vec![a0.ln(), ((a0 - 1.0) * st.mean).ln(), l0.ln()];
    let (t, value, converged, iterations, grad_norm) = fit_numeric(objective, t0, opts, n, 12.0);
    Ok(RivalFit {
        params: G0Params { alpha_g: -t[0].exp(), gamma_g: t[1].exp(), looks: t[2].exp() },
        loglik: value,
        converged,
        iterations,
        grad_norm,
    })
}
