//! Quasi-second-order ascent: BFGS with backtracking line search.
//!
//! Maximizes a smooth objective in a low-dimensional unconstrained space.
//! Curvature is accumulated from gradient differences; the line search
//! only accepts non-decreasing steps, so the iterate sequence is a
//! monotone ascent. Coordinates are clamped to a box to guard overflow in
//! log-parameter spaces.

pub(crate) struct MaxResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Scaled gradient norm at the final iterate (norm supplied by caller
    /// through `grad_scale`).
    pub grad_norm: f64,
}

pub(crate) struct Options {
    pub max_iter: usize,
    pub grad_tol: f64,
    /// Divide the sup-norm of the gradient by this before testing
    /// convergence (callers use the observation count).
    pub grad_scale: f64,
    /// Coordinate box half-width.
    pub bound: f64,
    /// Stop once two consecutive accepted steps improve the objective by
    /// less than `f_tol * (1 + |f|)`; `0.0` disables the rule.
    pub f_tol: f64,
}

const ARMIJO_C1: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 45;
const MAX_STEP: f64 = 2.0;

pub(crate) fn maximize<F, G>(f: F, grad: G, x0: &[f64], opts: &Options) -> MaxResult
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Option<Vec<f64>>,
{
    let n = x0.len();
    let clamp = |x: &mut [f64]| {
        for v in x.iter_mut() {
            *v = v.clamp(-opts.bound, opts.bound);
        }
    };
    let mut x = x0.to_vec();
    clamp(&mut x);
    let mut fx = f(&x);
    if !fx.is_finite() {
        return MaxResult { x, value: fx, converged: false, iterations: 0, grad_norm: f64::INFINITY };
    }
    let mut g = match grad(&x) {
        Some(g) => g,
        None => {
            return MaxResult {
                x,
                value: fx,
                converged: false,
                iterations: 0,
                grad_norm: f64::INFINITY,
            }
        }
    };

    // inverse Hessian approximation, identity start
    let mut h = identity(n);
    let mut restarted = false;
    let mut iterations = 0;
    let mut stalls = 0;

    for iter in 0..opts.max_iter {
        iterations = iter;
        let gnorm = inf_norm(&g) / opts.grad_scale;
        if gnorm <= opts.grad_tol {
            return MaxResult { x, value: fx, converged: true, iterations, grad_norm: gnorm };
        }

        // ascent direction p = H g
        let mut p = mat_vec(&h, &g);
        let mut slope = dot(&p, &g);
        if !(slope > 0.0) || !slope.is_finite() {
            // curvature went bad: restart from a fresh metric
            h = identity(n);
            p = g.clone();
            slope = dot(&g, &g);
        }
        // cap the raw step length in the box coordinates
        let pmax = inf_norm(&p);
        if pmax > MAX_STEP {
            let sc = MAX_STEP / pmax;
            for v in p.iter_mut() {
                *v *= sc;
            }
            slope *= sc;
        }

        // backtracking Armijo on the ascent
        let mut alpha = 1.0;
        let mut accepted = false;
        let mut x_new = x.clone();
        let mut f_new = fx;
        for _ in 0..MAX_BACKTRACKS {
            for i in 0..n {
                x_new[i] = x[i] + alpha * p[i];
            }
            clamp(&mut x_new);
            f_new = f(&x_new);
            if f_new.is_finite() && f_new >= fx + ARMIJO_C1 * alpha * slope {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            if !restarted {
                restarted = true;
                h = identity(n);
                continue;
            }
            // no improving step exists at this resolution
            let gnorm = inf_norm(&g) / opts.grad_scale;
            return MaxResult {
                x,
                value: fx,
                converged: gnorm <= opts.grad_tol,
                iterations,
                grad_norm: gnorm,
            };
        }

        if opts.f_tol > 0.0 {
            if f_new - fx <= opts.f_tol * (1.0 + f_new.abs()) {
                stalls += 1;
            } else {
                stalls = 0;
            }
            if stalls >= 2 {
                let g_new = grad(&x_new);
                let gnorm = match &g_new {
                    Some(g) => inf_norm(g) / opts.grad_scale,
                    None => f64::INFINITY,
                };
                return MaxResult {
                    x: x_new,
                    value: f_new,
                    converged: gnorm <= opts.grad_tol,
                    iterations: iter + 1,
                    grad_norm: gnorm,
                };
            }
        }

        let g_new = match grad(&x_new) {
            Some(g) => g,
            None => {
                return MaxResult {
                    x: x_new,
                    value: f_new,
                    converged: false,
                    iterations,
                    grad_norm: f64::INFINITY,
                }
            }
        };

        // BFGS update on the inverse Hessian (maximization: work with
        // s = Δx, y = -(g_new - g) so the standard minimization update
        // applies to -f)
        let s: Vec<f64> = (0..n).map(|i| x_new[i] - x[i]).collect();
        let y: Vec<f64> = (0..n).map(|i| g[i] - g_new[i]).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * norm2(&s) * norm2(&y) {
            bfgs_update(&mut h, &s, &y, sy);
        }

        x = x_new;
        fx = f_new;
        g = g_new;
    }
    let gnorm = inf_norm(&g) / opts.grad_scale;
    MaxResult {
        x,
        value: fx,
        converged: gnorm <= opts.grad_tol,
        iterations: iterations + 1,
        grad_norm: gnorm,
    }
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Standard BFGS inverse-Hessian update
/// `H <- (I - ρ s yᵀ) H (I - ρ y sᵀ) + ρ s sᵀ`.
fn bfgs_update(h: &mut [Vec<f64>], s: &[f64], y: &[f64], sy: f64) {
    let n = s.len();
    let rho = 1.0 / sy;
    let hy = mat_vec(h, y);
    let yhy = dot(&hy, y);
    for i in 0..n {
        for j in 0..n {
            h[i][j] += -rho * (s[i] * hy[j] + hy[i] * s[j]) + rho * (1.0 + rho * yhy) * s[i] * s[j];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximizes_concave_quadratic() {
        // f(x) = -(x0-1)^2 - 2(x1+2)^2
        let f = |x: &[f64]| -(x[0] - 1.0).powi(2) - 2.0 * (x[1] + 2.0).powi(2);
        let g = |x: &[f64]| Some(vec![-2.0 * (x[0] - 1.0), -4.0 * (x[1] + 2.0)]);
        let r = maximize(
            f,
            g,
            &[5.0, 5.0],
            &Options { max_iter: 200, grad_tol: 1e-10, grad_scale: 1.0, bound: 30.0, f_tol: 0.0 },
        );
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-7);
        assert!((r.x[1] + 2.0).abs() < 1e-7);
    }

    #[test]
    fn maximizes_negative_rosenbrock() {
        let f = |x: &[f64]| -((1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2));
        let g = |x: &[f64]| {
            Some(vec![
                2.0 * (1.0 - x[0]) + 400.0 * x[0] * (x[1] - x[0] * x[0]),
                -200.0 * (x[1] - x[0] * x[0]),
            ])
        };
        let r = maximize(
            f,
            g,
            &[-1.2, 1.0],
            &Options { max_iter: 600, grad_tol: 1e-9, grad_scale: 1.0, bound: 30.0, f_tol: 0.0 },
        );
        assert!(r.converged, "grad_norm = {}", r.grad_norm);
        assert!((r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn respects_bounds() {
        let f = |x: &[f64]| x[0]; // unbounded ascent
        let g = |_: &[f64]| Some(vec![1.0]);
        let r = maximize(
            f,
            g,
            &[0.0],
            &Options { max_iter: 500, grad_tol: 1e-9, grad_scale: 1.0, bound: 3.0, f_tol: 0.0 },
        );
        assert!(r.x[0] <= 3.0 + 1e-12);
        assert!(!r.converged);
    }
}
