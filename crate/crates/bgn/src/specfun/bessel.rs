//! Modified Bessel function of the second kind `K_ν(x)` for real order.
//!
//! Temme's series for `x < 2`, Steed's continued fraction (CF2) for
//! `x ≥ 2`, then stable upward recurrence in the order. The log-space
//! variant carries an explicit scale so large orders and large arguments
//! neither overflow nor underflow.

use crate::error::{Error, Result};
use crate::specfun::gamma::ln_gamma_raw;

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 20_000;
const RESCALE: f64 = 1e250;

/// `K_ν(x)` for `x > 0`. Symmetric in the order: `K_ν = K_{-ν}`.
/// Overflows to `+inf` when the value exceeds the f64 range; use
/// [`ln_bessel_k`] in that regime.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    Ok(ln_bessel_k(nu, x)?.exp())
}

/// `ln K_ν(x)` for `x > 0`.
pub fn ln_bessel_k(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("bessel_k", format!("x = {x}, need x > 0")));
    }
    if !nu.is_finite() {
        return Err(Error::domain("bessel_k", format!("nu = {nu}, need finite")));
    }
    let nu = nu.abs();
    let nl = (nu + 0.5).floor();
    let mu = nu - nl;

    // (K_mu, K_{mu+1}) up to the factor exp(base_ln)
    let (kmu, kmu1, base_ln) = if x < 2.0 {
        k_temme_series(mu, x)?
    } else {
        k_steed_cf2(mu, x)?
    };

    // upward recurrence K_{v+1} = K_{v-1} + (2v/x) K_v, rescaling as needed
    let mut ka = kmu;
    let mut kb = kmu1;
    let mut scale_ln = 0.0;
    let steps = nl as usize;
    for i in 1..=steps {
        let v = mu + i as f64;
        let kc = ka + (2.0 * v / x) * kb;
        ka = kb;
        kb = kc;
        if ka > RESCALE {
            ka /= RESCALE;
            kb /= RESCALE;
            scale_ln += RESCALE.ln();
        }
    }
    // after the loop ka = K_{mu+nl} = K_nu
    Ok(ka.ln() + scale_ln + base_ln)
}

/// Temme's series for small arguments; returns (K_mu, K_{mu+1}, 0.0).
fn k_temme_series(mu: f64, x: f64) -> Result<(f64, f64, f64)> {
    let x2 = 0.5 * x;
    let mu2 = mu * mu;
    let pimu = std::f64::consts::PI * mu;
    let fact = if pimu.abs() < 1e-14 { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = mu * d;
    let fact2 = if e.abs() < 1e-14 { 1.0 } else { e.sinh() / e };
    let (gam1, gam2, gampl, gammi) = reciprocal_gamma_pair(mu);

    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let e = e.exp();
    let mut p = 0.5 * e / gampl;
    let mut q = 0.5 / (e * gammi);
    let mut c = 1.0;
    let d2 = x2 * x2;
    let mut sum1 = p;
    let mut converged = false;
    for i in 1..=MAX_ITER {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu2);
        c *= d2 / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        sum1 += c * (p - fi * ff);
        if del.abs() < sum.abs() * EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence { func: "bessel_k", iters: MAX_ITER });
    }
    Ok((sum, sum1 * 2.0 / x, 0.0))
}

/// Steed's CF2 for `x ≥ 2`; returns (e^x K_mu, e^x K_{mu+1}, -x).
fn k_steed_cf2(mu: f64, x: f64) -> Result<(f64, f64, f64)> {
    let mu2 = mu * mu;
    let a1 = 0.25 - mu2;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut converged = false;
    for i in 2..=MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() <= EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence { func: "bessel_k", iters: MAX_ITER });
    }
    let h = a1 * h;
    // scaled: these are e^x K_mu and e^x K_{mu+1}
    let kmu = (std::f64::consts::PI / (2.0 * x)).sqrt() / s;
    let kmu1 = kmu * (mu + x + 0.5 - h) / x;
    Ok((kmu, kmu1, -x))
}

/// gam1 = [1/Γ(1-μ) - 1/Γ(1+μ)]/(2μ), gam2 = [1/Γ(1-μ) + 1/Γ(1+μ)]/2,
/// plus the reciprocals themselves. |μ| ≤ 1/2.
fn reciprocal_gamma_pair(mu: f64) -> (f64, f64, f64, f64) {
    let gampl = (-ln_gamma_raw(1.0 + mu)).exp();
    let gammi = if mu == 0.0 { 1.0 } else { (-ln_gamma_raw(1.0 - mu)).exp() };
    let gam2 = 0.5 * (gammi + gampl);
    // odd Taylor coefficients of 1/Γ(1+z) give gam1 without cancellation
    let gam1 = if mu.abs() < 0.01 {
        let m2 = mu * mu;
        -(0.577_215_664_901_532_86
            + m2 * (-0.042_002_635_034_095_236
                + m2 * (-0.042_197_734_555_544_337 + m2 * 0.007_218_943_246_663_1)))
    } else {
        (gammi - gampl) / (2.0 * mu)
    };
    (gam1, gam2, gampl, gammi)
}
