//! The five-parameter beta generalized normal (BGN) distribution.
//!
//! Composes the beta generator `F = I_G(α, β)` with the generalized
//! normal cdf: density, cdf, quantile, the inverse-transform sampler, and
//! the large-`s` limiting beta density. `α = β = 1` reduces every
//! operation to the GN sub-model.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::gn::{self, GnParams};
use crate::specfun::{ln_beta_raw, reg_inc_beta_inv, reg_inc_beta_raw, Accuracy};

/// Parameter vector (α, β, μ, σ, s) with positivity constraints on
/// everything but the location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BgnParams {
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub sigma: f64,
    pub s: f64,
}

/// A reproducible batch of draws: identical (seed, params, length) give
/// bit-identical values.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    pub seed: u64,
    pub params: BgnParams,
}

impl BgnParams {
    /// Checked constructor: `alpha, beta, sigma, s > 0`, `mu` finite.
    pub fn new(alpha: f64, beta: f64, mu: f64, sigma: f64, s: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta), ("sigma", sigma), ("s", s)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain("BgnParams", format!("{name} = {v}, need > 0")));
            }
        }
        if !mu.is_finite() {
            return Err(Error::domain("BgnParams", format!("mu = {mu}, need finite")));
        }
        Ok(BgnParams { alpha, beta, mu, sigma, s })
    }

    /// The GN sub-model carrying this distribution's location, dispersion
    /// and shape.
    pub fn gn(&self) -> GnParams {
        GnParams { mu: self.mu, sigma: self.sigma, s: self.s }
    }

    /// Density. Returns `+inf` at unbounded-density points (`Φ_s` hitting
    /// 0 or 1 with the corresponding shape below 1).
    pub fn pdf(&self, x: f64) -> f64 {
        let z = (x - self.mu) / self.sigma;
        let big_phi = gn::cdf_std_raw(z, self.s);
        let sf = gn::sf_std_raw(z, self.s);
        if big_phi == 0.0 || sf == 0.0 {
            // far tail: assemble in log space so 0^negative times an
            // underflowed density cannot produce NaN
            return self.ln_pdf(x).exp();
        }
        let phi = gn::pdf_std_raw(z, self.s);
        big_phi.powf(self.alpha - 1.0) * sf.powf(self.beta - 1.0) * phi
            / (self.sigma * ln_beta_raw(self.alpha, self.beta).exp())
    }

    /// Log-density; `-inf` where the density vanishes, `+inf` at
    /// unbounded-density points.
    pub fn ln_pdf(&self, x: f64) -> f64 {
        let z = (x - self.mu) / self.sigma;
        let s = self.s;
        let (ln_phi, ln_sf) = gn::ln_cdf_sf_raw(z, s);
        let ln_phi_s = s.ln()
            - std::f64::consts::LN_2
            - crate::specfun::ln_gamma_raw(1.0 / s)
            - gn::pow_abs(z, s);
        let mut total = -self.sigma.ln() - ln_beta_raw(self.alpha, self.beta) + ln_phi_s;
        if self.alpha != 1.0 {
            total += (self.alpha - 1.0) * ln_phi;
        }
        if self.beta != 1.0 {
            total += (self.beta - 1.0) * ln_sf;
        }
        total
    }

    /// Cdf `F(x) = I_{Φ_s((x-μ)/σ)}(α, β)`.
    pub fn cdf(&self, x: f64) -> f64 {
        let z = (x - self.mu) / self.sigma;
        let big_phi = gn::cdf_std_raw(z, self.s);
        reg_inc_beta_raw(big_phi, self.alpha, self.beta, &Accuracy::default())
    }

    /// Quantile: GN inversion of the inverse incomplete beta.
    pub fn quantile(&self, prob: f64) -> Result<f64> {
        if !(prob > 0.0 && prob < 1.0) {
            return Err(Error::domain(
                "bgn_quantile",
                format!("prob = {prob}, need 0 < prob < 1"),
            ));
        }
        let u = reg_inc_beta_inv(prob, self.alpha, self.beta)?;
        // complement through the beta symmetry so the upper tail keeps
        // its precision
        let omu = reg_inc_beta_inv(1.0 - prob, self.beta, self.alpha)?;
        Ok(self.gn().quantile_from_pair(u, omu))
    }

    /// Inverse-transform sampler: draw `U ~ beta(α, β)` as a ratio of two
    /// gamma variates, then apply the two-branch GN inversion.
    pub fn sample(&self, n: usize, seed: u64) -> SampleBatch {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ga = Gamma::new(self.alpha, 1.0).expect("validated alpha");
        let gb = Gamma::new(self.beta, 1.0).expect("validated beta");
        let gn = self.gn();
        let mut values = Vec::with_capacity(n);
        for _ in 0..n {
            let g1: f64 = ga.sample(&mut rng);
            let g2: f64 = gb.sample(&mut rng);
            let total = g1 + g2;
            let mut u = g1 / total;
            let mut omu = g2 / total;
            // tiny-shape gamma draws can underflow to zero; clamp into the
            // open interval so the quantile stays finite
            if u == 0.0 {
                u = f64::MIN_POSITIVE;
            }
            if omu == 0.0 {
                omu = f64::MIN_POSITIVE;
            }
            values.push(gn.quantile_from_pair(u, omu));
        }
        SampleBatch { values, seed, params: *self }
    }

    /// Large-`s` limit density: a beta density rescaled to `[μ-σ, μ+σ]`,
    /// zero outside.
    pub fn limiting_beta_pdf(&self, x: f64) -> f64 {
        let y = 0.5 * ((x - self.mu) / self.sigma + 1.0);
        if !(0.0..=1.0).contains(&y) {
            return 0.0;
        }
        let ln_b = ln_beta_raw(self.alpha, self.beta);
        y.powf(self.alpha - 1.0) * (1.0 - y).powf(self.beta - 1.0) * (-ln_b).exp()
            / (2.0 * self.sigma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;

    fn approx(a: f64, b: f64, tol: f64) {
        let err = (a - b).abs() / b.abs().max(1e-300);
        assert!(err <= tol, "got {a}, want {b}, rel err {err:.3e} > {tol:e}");
    }

    fn p(alpha: f64, beta: f64, mu: f64, sigma: f64, s: f64) -> BgnParams {
        BgnParams::new(alpha, beta, mu, sigma, s).unwrap()
    }

    #[test]
    fn constructor_rejects_bad_params() {
        assert!(BgnParams::new(0.0, 1.0, 0.0, 1.0, 1.0).is_err());
        assert!(BgnParams::new(1.0, -1.0, 0.0, 1.0, 1.0).is_err());
        assert!(BgnParams::new(1.0, 1.0, f64::NAN, 1.0, 1.0).is_err());
        assert!(BgnParams::new(1.0, 1.0, 0.0, 0.0, 1.0).is_err());
        assert!(BgnParams::new(1.0, 1.0, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn pdf_examples() {
        approx(p(1.0, 1.0, 0.0, 1.0, 2.0).pdf(0.0), 1.0 / std::f64::consts::PI.sqrt(), 1e-13);
        // (1/B(2,1)) Φ_1(0)^1 φ_1(0) = 2 * 0.5 * 0.5
        approx(p(2.0, 1.0, 0.0, 1.0, 1.0).pdf(0.0), 0.5, 1e-13);
    }

    #[test]
    fn pdf_normalizes() {
        let d = p(0.25, 0.5, 0.0, 1.0, 4.0);
        let f = move |x: f64| d.pdf(x);
        let mass = quad::integrate_split(&f, &[-8.0, 0.0, 8.0], 1e-9).unwrap();
        assert!((mass - 1.0).abs() <= 1e-7, "mass = {mass}");
    }

    #[test]
    fn ln_pdf_consistent_with_pdf() {
        let d = p(0.7, 2.3, 0.4, 1.5, 1.3);
        for i in -20..=20 {
            let x = i as f64 * 0.33;
            approx(d.ln_pdf(x).exp(), d.pdf(x), 1e-12);
        }
    }

    #[test]
    fn gn_reduction_identity() {
        // alpha = beta = 1 reduces to the GN density, 1e-13 on 101 points
        for &s in &[0.5, 1.0, 2.0, 4.0] {
            let d = p(1.0, 1.0, 0.3, 1.7, s);
            let g = d.gn();
            for i in 0..=100 {
                let x = -5.0 + 10.0 * i as f64 / 100.0;
                let a = d.pdf(x);
                let b = g.pdf(x);
                assert!(
                    (a - b).abs() <= 1e-13 * b.max(1.0),
                    "s={s} x={x}: bgn={a} gn={b}"
                );
            }
        }
    }

    #[test]
    fn location_scale_closure() {
        let d = p(0.8, 2.5, 1.3, 2.2, 1.6);
        let d0 = p(0.8, 2.5, 0.0, 1.0, 1.6);
        for i in 0..=100 {
            let x = -6.0 + 12.0 * i as f64 / 100.0;
            let lhs = d.pdf(x);
            let rhs = d0.pdf((x - d.mu) / d.sigma) / d.sigma;
            assert!((lhs - rhs).abs() <= 1e-13 * rhs.max(1e-10), "x={x}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn cdf_examples() {
        approx(p(3.0, 3.0, 2.0, 1.5, 1.0).cdf(2.0), 0.5, 1e-13);
        approx(p(1.0, 1.0, 2.0, 1.5, 2.0).cdf(2.0), 0.5, 1e-13);
        // quadrature oracle (mpmath): I_{Φ_2(1)}(2, 5)
        approx(p(2.0, 5.0, 0.0, 1.0, 2.0).cdf(1.0), 0.99998312693289804565, 1e-11);
    }

    #[test]
    fn cdf_is_pdf_antiderivative() {
        let d = p(1.4, 0.9, 0.0, 1.0, 2.0);
        for &x in &[-1.7, -0.4, 0.6, 1.9] {
            let h = 1e-5;
            let fd = (d.cdf(x + h) - d.cdf(x - h)) / (2.0 * h);
            approx(fd, d.pdf(x), 1e-5);
        }
    }

    #[test]
    fn quantile_examples() {
        approx(p(3.0, 3.0, 7.0, 2.0, 1.0).quantile(0.5).unwrap(), 7.0, 1e-12);
        approx(
            p(1.0, 1.0, 0.0, 1.0, 1.0).quantile(0.3).unwrap(),
            0.6f64.ln(),
            1e-10,
        );
        // bisection-on-cdf oracle (mpmath findroot)
        approx(
            p(0.5, 2.0, 0.0, 1.0, 2.0).quantile(0.9).unwrap(),
            0.056561539241987133399,
            1e-8,
        );
        assert!(p(1.0, 1.0, 0.0, 1.0, 1.0).quantile(0.0).is_err());
    }

    #[test]
    fn quantile_round_trip() {
        let d = p(0.6, 1.8, -0.5, 2.0, 1.2);
        for i in 1..40 {
            let prob = i as f64 / 40.0;
            let x = d.quantile(prob).unwrap();
            assert!((d.cdf(x) - prob).abs() <= 1e-8, "prob={prob}: cdf={}", d.cdf(x));
        }
    }

    #[test]
    fn sampler_is_deterministic() {
        let d = p(1.3, 0.8, 0.2, 1.1, 2.0);
        let a = d.sample(5, 42);
        let b = d.sample(5, 42);
        assert_eq!(a, b);
        let c = d.sample(5, 43);
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn sampler_matches_gn_moments() {
        // GN s=2 is normal with variance σ²/2
        let d = p(1.0, 1.0, 0.0, 1.0, 2.0);
        let batch = d.sample(100_000, 1);
        let n = batch.values.len() as f64;
        let mean = batch.values.iter().sum::<f64>() / n;
        let var = batch.values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        assert!(mean.abs() <= 0.01, "mean = {mean}");
        assert!((var - 0.5).abs() <= 0.01, "var = {var}");
    }

    fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
        let n = sorted.len() as f64;
        let mut d = 0.0f64;
        for (i, &x) in sorted.iter().enumerate() {
            let f = cdf(x);
            d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
        }
        d
    }

    #[test]
    fn sampler_law_ks() {
        // 1% critical value 1.628/sqrt(n); grid includes the paper's
        // figure settings (0.1, 0.3, 0, 1, s)
        let grid = [
            p(0.1, 0.3, 0.0, 1.0, 2.0),
            p(0.1, 0.3, 0.0, 1.0, 4.0),
            p(0.1, 0.3, 0.0, 1.0, 6.0),
            p(0.1, 0.3, 0.0, 1.0, 12.0),
            p(1.0, 1.0, 0.0, 1.0, 1.0),
            p(2.5, 0.8, -1.0, 2.0, 1.0),
        ];
        let n = 100_000;
        let crit = 1.628 / (n as f64).sqrt();
        for (i, d) in grid.iter().enumerate() {
            let mut v = d.sample(n, 1000 + i as u64).values;
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let ks = ks_statistic(&v, |x| d.cdf(x));
            assert!(ks < crit, "grid point {i}: ks = {ks}, crit = {crit}");
        }
    }

    #[test]
    fn limiting_beta_examples() {
        approx(p(1.0, 1.0, 0.0, 1.0, 8.0).limiting_beta_pdf(0.0), 0.5, 1e-13);
        assert_eq!(p(1.0, 2.0, 0.0, 1.0, 8.0).limiting_beta_pdf(1.0), 0.0);
        approx(p(2.0, 1.0, 0.0, 1.0, 8.0).limiting_beta_pdf(0.0), 0.5, 1e-13);
        assert_eq!(p(1.0, 1.0, 0.0, 1.0, 8.0).limiting_beta_pdf(1.5), 0.0);
    }

    #[test]
    fn large_s_approaches_limiting_beta() {
        // sup distance <= 0.05 on the interior 90% of support at s = 64
        for &(al, be) in &[(0.5, 0.5), (2.0, 1.0)] {
            let d = p(al, be, 0.0, 1.0, 64.0);
            let mut sup: f64 = 0.0;
            for i in 0..=200 {
                let x = -0.9 + 1.8 * i as f64 / 200.0;
                sup = sup.max((d.pdf(x) - d.limiting_beta_pdf(x)).abs());
            }
            assert!(sup <= 0.05, "(α,β)=({al},{be}): sup = {sup}");
        }
    }
}
