//! Generalized normal (GN) sub-model.
//!
//! Standardized density `φ_s(z) = s/(2Γ(1/s)) exp(-|z|^s)`, the two-branch
//! cdf `Φ_s` built on the complementary incomplete gamma function, the
//! location-scale cdf, and the inverse-transform quantile. `s = 1` is
//! Laplace, `s = 2` is normal with variance `σ²/2`.

use crate::error::{Error, Result};
use crate::specfun::{
    digamma_raw, dgamma_ds, gamma_quantile_upper_with, ln_gamma_raw, reg_upper_raw, Accuracy,
};

/// Location / dispersion / shape parameters of the GN distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnParams {
    pub mu: f64,
    pub sigma: f64,
    pub s: f64,
}

impl GnParams {
    /// Checked constructor: `sigma > 0`, `s > 0`, `mu` finite.
    pub fn new(mu: f64, sigma: f64, s: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::domain("GnParams", format!("mu = {mu}, need finite")));
        }
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::domain("GnParams", format!("sigma = {sigma}, need > 0")));
        }
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::domain("GnParams", format!("s = {s}, need > 0")));
        }
        Ok(GnParams { mu, sigma, s })
    }

    /// Density `g(x) = φ_s((x-μ)/σ)/σ`.
    pub fn pdf(&self, x: f64) -> f64 {
        pdf_std_raw((x - self.mu) / self.sigma, self.s) / self.sigma
    }

    /// Cdf `G(x) = Φ_s((x-μ)/σ)`; continuous with value 1/2 at `x = μ`.
    pub fn cdf(&self, x: f64) -> f64 {
        cdf_std_raw((x - self.mu) / self.sigma, self.s)
    }

    /// Quantile by the inverse-transform branches
    /// `x = μ ∓ σ [F_Γ^{-1}(·)]^{1/s}` for `u ∈ (0, 1)`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::domain("gn_quantile", format!("u = {u}, need 0 < u < 1")));
        }
        Ok(self.quantile_from_pair(u, 1.0 - u))
    }

    /// Quantile with `u` and `1 - u` supplied separately, so callers that
    /// know the complement exactly (samplers) keep full tail precision.
    pub(crate) fn quantile_from_pair(&self, u: f64, one_minus_u: f64) -> f64 {
        let a = 1.0 / self.s;
        let acc = Accuracy::default();
        // u <= 1/2 branch targets Q(a, t) = 2u; the other Q(a, t) = 2(1-u)
        if u <= 0.5 {
            let t = gamma_quantile_upper_with((2.0 * u).min(1.0), a, &acc)
                .unwrap_or(f64::INFINITY);
            self.mu - self.sigma * t.powf(1.0 / self.s)
        } else {
            let t = gamma_quantile_upper_with((2.0 * one_minus_u).min(1.0), a, &acc)
                .unwrap_or(f64::INFINITY);
            self.mu + self.sigma * t.powf(1.0 / self.s)
        }
    }
}

/// `|z|^s` with the convention `|0|^s = 0` for every `s > 0`.
#[inline]
pub(crate) fn pow_abs(z: f64, s: f64) -> f64 {
    let a = z.abs();
    if a == 0.0 {
        0.0
    } else {
        (s * a.ln()).exp()
    }
}

#[inline]
pub(crate) fn pdf_std_raw(z: f64, s: f64) -> f64 {
    s / (2.0 * ln_gamma_raw(1.0 / s).exp()) * (-pow_abs(z, s)).exp()
}

/// One-sided tail information at `y = |z|^s`: the regularized lower
/// incomplete gamma when `y` is in the series region (resolving `y` in
/// log form, which matters when `|z|^s` underflows at large `s`), or the
/// regularized upper function otherwise.
pub(crate) enum HalfTail {
    Lower(f64),
    Upper(f64),
}

pub(crate) fn half_tail(z: f64, s: f64) -> HalfTail {
    let a = 1.0 / s;
    if z == 0.0 {
        return HalfTail::Lower(0.0);
    }
    let acc = Accuracy::default();
    let ln_y = s * z.abs().ln();
    if ln_y < (a + 1.0).ln() {
        HalfTail::Lower(crate::specfun::reg_lower_series_ln(a, ln_y, &acc))
    } else {
        HalfTail::Upper(reg_upper_raw(a, ln_y.exp(), &acc))
    }
}

pub(crate) fn cdf_std_raw(z: f64, s: f64) -> f64 {
    match half_tail(z, s) {
        HalfTail::Lower(p) => {
            if z <= 0.0 {
                0.5 * (1.0 - p)
            } else {
                0.5 * (1.0 + p)
            }
        }
        HalfTail::Upper(q) => {
            if z <= 0.0 {
                0.5 * q
            } else {
                1.0 - 0.5 * q
            }
        }
    }
}

/// Upper tail `1 - Φ_s(z)` computed without cancellation for large `z`.
pub(crate) fn sf_std_raw(z: f64, s: f64) -> f64 {
    cdf_std_raw(-z, s)
}

/// `(ln Φ_s(z), ln(1 - Φ_s(z)))`, each evaluated on its accurate side,
/// staying finite deep into both tails.
pub(crate) fn ln_cdf_sf_raw(z: f64, s: f64) -> (f64, f64) {
    const LN2: f64 = std::f64::consts::LN_2;
    let (ln_near, ln_far) = match half_tail(z, s) {
        HalfTail::Lower(p) => ((-p).ln_1p() - LN2, p.ln_1p() - LN2),
        HalfTail::Upper(q) => {
            let a = 1.0 / s;
            let ln_q =
                crate::specfun::ln_reg_upper_raw(a, pow_abs(z, s), &Accuracy::default());
            (ln_q - LN2, (-0.5 * q).ln_1p())
        }
    };
    // "near" is the side z sits on: the left tail for z <= 0
    if z <= 0.0 {
        (ln_near, ln_far)
    } else {
        (ln_far, ln_near)
    }
}

/// Standardized GN density `φ_s(z)`.
pub fn pdf_std(z: f64, s: f64) -> Result<f64> {
    check_shape(s)?;
    Ok(pdf_std_raw(z, s))
}

/// Standardized GN cdf `Φ_s(z)`.
pub fn cdf_std(z: f64, s: f64) -> Result<f64> {
    check_shape(s)?;
    Ok(cdf_std_raw(z, s))
}

/// `d/ds Φ_s(z)`: the shape-derivative of the standardized cdf, assembled
/// from `dgamma_ds` and the digamma correction of the normalizer.
pub fn dcdf_std_ds(z: f64, s: f64) -> Result<f64> {
    check_shape(s)?;
    if z == 0.0 {
        return Ok(0.0);
    }
    let a = 1.0 / s;
    let w = z.abs();
    let y = pow_abs(w, s);
    let v = if y < 1e-280 {
        // y -> 0 limit of [ψ̃(s, w) + ψ(1/s) Γ(1/s, w^s)/s²] / (2Γ(1/s)):
        // the digamma terms cancel, leaving -w ln(w) / (2Γ(1/s))
        -(w * w.ln()) / (2.0 * ln_gamma_raw(a).exp())
    } else {
        let acc = Accuracy::default();
        let upper = reg_upper_raw(a, y, &acc) * ln_gamma_raw(a).exp();
        (dgamma_ds(s, w)? + digamma_raw(a) * upper / (s * s)) / (2.0 * ln_gamma_raw(a).exp())
    };
    Ok(if z < 0.0 { v } else { -v })
}

fn check_shape(s: f64) -> Result<()> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain("gn", format!("s = {s}, need s > 0")));
    }
    Ok(())
}
