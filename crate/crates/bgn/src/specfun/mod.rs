//! Self-contained special-function kernel.
//!
//! Gamma family (log-gamma, digamma, incomplete gamma pair, gamma
//! quantile), regularized incomplete beta and its inverse, modified
//! Bessel K of real order, and the order-derivative machinery for the
//! incomplete gamma function. All routines are pure `f64` and re-entrant.

mod bessel;
mod beta;
mod deriv;
mod gamma;

pub use bessel::{bessel_k, ln_bessel_k};
pub use beta::{ln_beta, reg_inc_beta, reg_inc_beta_inv, reg_inc_beta_inv_with};
pub use deriv::{dgamma_ds, dgamma_ds_with, t3, t3_with};
pub use gamma::{
    digamma, gamma_quantile, gamma_quantile_upper, gamma_quantile_upper_with,
    gamma_quantile_with, ln_gamma, reg_lower_gamma, reg_upper_gamma, upper_inc_gamma,
    EULER_GAMMA,
};

pub(crate) use beta::{ln_beta_raw, reg_inc_beta_raw};
pub(crate) use gamma::{
    digamma_raw, ln_gamma_raw, ln_reg_upper_raw, reg_lower_series_ln, reg_upper_raw,
};

/// Iteration control for the routines that iterate (continued fractions,
/// series, quantile root finders).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy {
    /// Relative tolerance for convergence checks.
    pub rel_tol: f64,
    /// Iteration cap.
    pub max_iter: usize,
}

impl Accuracy {
    /// Checked constructor: `0 < rel_tol < 1e-3`, `max_iter >= 10`.
    pub fn new(rel_tol: f64, max_iter: usize) -> crate::Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1e-3) {
            return Err(crate::Error::domain(
                "Accuracy",
                format!("rel_tol = {rel_tol}, need 0 < rel_tol < 1e-3"),
            ));
        }
        if max_iter < 10 {
            return Err(crate::Error::domain(
                "Accuracy",
                format!("max_iter = {max_iter}, need >= 10"),
            ));
        }
        Ok(Accuracy { rel_tol, max_iter })
    }
}

impl Default for Accuracy {
    fn default() -> Self {
        Accuracy { rel_tol: 1e-12, max_iter: 500 }
    }
}
