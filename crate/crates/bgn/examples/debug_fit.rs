use bgn::mle::{fit_bgn, FitOptions};
use bgn::BgnParams;
use std::time::Instant;

fn main() {
    let a1hh = BgnParams::new(1.3, 0.026, 0.015, 1.97, 0.5).unwrap();
    let opts = FitOptions { n_starts: 14, max_iter: 120, grad_tol: 1e-5, f_tol: 1e-9, ..Default::default() };
    let mut wins = 0;
    let mut conv = 0;
    let t0 = Instant::now();
    for seed in 0..10u64 {
        let draws = a1hh.sample(5000, seed).values;
        let data: Vec<f64> = draws.into_iter().filter(|v| *v > 0.0).collect();
        let r = fit_bgn(&data, &FitOptions { seed: 1000 + seed, ..opts }).unwrap();
        let g0 = bgn::rivals::fit_g0(&data, &FitOptions::default()).unwrap();
        let win = (10.0 - 2.0 * r.loglik) < (6.0 - 2.0 * g0.loglik);
        if win { wins += 1; }
        if r.converged { conv += 1; }
        println!("seed {seed}: conv={} gnorm={:.2e} iters={} b={:.4} s={:.3} {}",
            r.converged, r.grad_norm, r.iterations, r.params.beta, r.params.s,
            if win {"BGN"} else {"G0"});
    }
    println!("== wins {wins}/10 conv {conv}/10, {:.1}s ({:.1}s/fit)",
        t0.elapsed().as_secs_f64(), t0.elapsed().as_secs_f64() / 10.0);
}
