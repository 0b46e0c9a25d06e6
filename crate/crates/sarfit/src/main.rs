//! Command-line interface.
//!
//! Exit codes: 0 success, 2 usage error, 3 data error, 4 convergence
//! failure under `--strict`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use bgn::mle::{fit_bgn, FitOptions};
use bgn::moments::{moment_quadrature, moment_series, SeriesTruncation};
use bgn::BgnParams;
use sarfit::compare::compare;
use sarfit::describe::describe;
use sarfit::mc::{mc_study, parse_sweep, McConfig, Scenario};
use sarfit::region::{load_region, Format, IntensityRegion, Rect};
use sarfit::report;
use sarfit::rng_check::rng_check;

#[derive(Parser)]
#[command(name = "sarfit", version, about = "BGN distribution tools and SAR intensity model comparison")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct DistArgs {
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 0.0)]
    mu: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 2.0)]
    s: f64,
}

impl DistArgs {
    fn params(&self) -> Result<BgnParams, CliError> {
        BgnParams::new(self.alpha, self.beta, self.mu, self.sigma, self.s)
            .map_err(|e| CliError::usage(format!("invalid distribution parameters: {e}")))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Pgm16,
    Raw,
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Input file (csv, 16-bit PGM, or raw little-endian f32).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Raster width (required for --format raw).
    #[arg(long)]
    width: Option<u32>,
    /// Raster height (required for --format raw).
    #[arg(long)]
    height: Option<u32>,
    /// Rectangular extract x0,y0,w,h in pixels.
    #[arg(long)]
    rect: Option<String>,
    /// Polarization channel label carried as provenance.
    #[arg(long, default_value = "HH")]
    channel: String,
}

impl InputArgs {
    fn load(&self) -> Result<IntensityRegion, CliError> {
        let format = match self.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Pgm16 => Format::Pgm16,
            FormatArg::Raw => {
                let (w, h) = match (self.width, self.height) {
                    (Some(w), Some(h)) => (w, h),
                    _ => {
                        return Err(CliError::usage(
                            "--format raw requires --width and --height".into(),
                        ))
                    }
                };
                Format::RawF32le { width: w, height: h }
            }
        };
        let rect = match &self.rect {
            None => None,
            Some(spec) => Some(parse_rect(spec)?),
        };
        load_region(&self.input, format, rect, &self.channel).map_err(CliError::data)
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Emit JSON instead of aligned text.
    #[arg(long)]
    json: bool,
    /// Write output to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[arg(long, default_value_t = 8)]
    starts: usize,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exit with code 4 if the fit does not converge.
    #[arg(long)]
    strict: bool,
}

impl FitArgs {
    fn options(&self) -> FitOptions {
        FitOptions {
            max_iter: self.max_iter,
            n_starts: self.starts,
            seed: self.seed,
            ..Default::default()
        }
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate the BGN density at points.
    Pdf {
        #[command(flatten)]
        dist: DistArgs,
        /// Comma-separated evaluation points.
        #[arg(long, conflicts_with = "grid")]
        x: Option<String>,
        /// Uniform grid lo:hi:count.
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate the BGN cdf at points.
    Cdf {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long, conflicts_with = "grid")]
        x: Option<String>,
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate the BGN quantile at probabilities.
    Quantile {
        #[command(flatten)]
        dist: DistArgs,
        /// Comma-separated probabilities in (0,1).
        #[arg(long)]
        p: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Draw a reproducible sample.
    Sample {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Series and quadrature moments E(X^n).
    Moment {
        #[command(flatten)]
        dist: DistArgs,
        /// Moment order.
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Maximum-likelihood BGN fit of an intensity region.
    Fit {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        fit: FitArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fit BGN, Gamma, K and G0 and rank them by AIC/AICc/BIC.
    Compare {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        fit: FitArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Descriptive statistics of an intensity region.
    Describe {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Monte Carlo shape-influence study (mean integrated squared error).
    McStudy {
        #[arg(long, default_value_t = 1000)]
        replications: usize,
        /// Comma-separated sample sizes.
        #[arg(long, default_value = "49,121,400")]
        sizes: String,
        #[arg(long, value_enum, default_value = "s")]
        scenario: ScenarioArg,
        /// Sweep specification lo:hi:step.
        #[arg(long, default_value = "1:5:0.5")]
        sweep: String,
        #[arg(long, default_value_t = 512)]
        grid_points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        starts: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sampler validation: KS statistic, histogram, density curve.
    RngCheck {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 40)]
        bins: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ScenarioArg {
    S,
    Beta,
    Alpha,
}

struct CliError {
    msg: String,
    code: i32,
}

impl CliError {
    fn usage(msg: String) -> Self {
        CliError { msg, code: 2 }
    }
    fn data(err: sarfit::Error) -> Self {
        let code = match &err {
            sarfit::Error::NoModelConverged(_) => 4,
            _ => 3,
        };
        CliError { msg: err.to_string(), code }
    }
    fn numeric(err: bgn::Error) -> Self {
        let code = match &err {
            bgn::Error::Domain { .. } => 2,
            bgn::Error::Convergence { .. } => 4,
            _ => 3,
        };
        CliError { msg: err.to_string(), code }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.cmd) {
        eprintln!("error: {}", e.msg);
        std::process::exit(e.code);
    }
}

fn run(cmd: Cmd) -> Result<(), CliError> {
    match cmd {
        Cmd::Pdf { dist, x, grid, output } => {
            let p = dist.params()?;
            let xs = eval_points(x.as_deref(), grid.as_deref())?;
            let rows: Vec<(f64, f64)> = xs.iter().map(|&x| (x, p.pdf(x))).collect();
            emit_pairs(&output, "x", "pdf", &rows)
        }
        Cmd::Cdf { dist, x, grid, output } => {
            let p = dist.params()?;
            let xs = eval_points(x.as_deref(), grid.as_deref())?;
            let rows: Vec<(f64, f64)> = xs.iter().map(|&x| (x, p.cdf(x))).collect();
            emit_pairs(&output, "x", "cdf", &rows)
        }
        Cmd::Quantile { dist, p, output } => {
            let d = dist.params()?;
            let ps = parse_list(&p)?;
            let mut rows = Vec::new();
            for prob in ps {
                let q = d.quantile(prob).map_err(CliError::numeric)?;
                rows.push((prob, q));
            }
            emit_pairs(&output, "p", "quantile", &rows)
        }
        Cmd::Sample { dist, n, seed, output } => {
            let p = dist.params()?;
            if n == 0 {
                return Err(CliError::usage("--n must be >= 1".into()));
            }
            let batch = p.sample(n, seed);
            if output.json {
                let doc = json!({"seed": seed, "n": n, "values": batch.values});
                write_out(&output.out, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
            } else {
                let mut text = String::new();
                for v in &batch.values {
                    text.push_str(&format!("{v}\n"));
                }
                write_out(&output.out, &text)
            }
        }
        Cmd::Moment { dist, n, output } => {
            let p = dist.params()?;
            if n == 0 {
                return Err(CliError::usage("--n must be >= 1".into()));
            }
            let trunc = SeriesTruncation::default();
            let series = moment_series(n, &p, &trunc);
            let quad = moment_quadrature(n, &p).map_err(CliError::numeric)?;
            if output.json {
                let (sv, flag) = match &series {
                    Ok(m) => (json!(m.value), json!(m.heuristic_truncation)),
                    Err(e) => (json!(null), json!(format!("{e}"))),
                };
                let doc = json!({
                    "order": n,
                    "series": sv,
                    "series_heuristic": flag,
                    "quadrature": quad,
                });
                write_out(&output.out, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
            } else {
                let mut text = String::new();
                match series {
                    Ok(m) => {
                        text.push_str(&format!(
                            "series     {}{}\n",
                            report::sig6(m.value),
                            if m.heuristic_truncation { "  (heuristic truncation)" } else { "" }
                        ));
                    }
                    Err(e) => text.push_str(&format!("series     unavailable ({e})\n")),
                }
                text.push_str(&format!("quadrature {}\n", report::sig6(quad)));
                write_out(&output.out, &text)
            }
        }
        Cmd::Fit { input, fit, output } => {
            let region = input.load()?;
            let r = fit_bgn(&region.values, &fit.options()).map_err(CliError::numeric)?;
            if fit.strict && !r.converged {
                return Err(CliError {
                    msg: format!("fit did not converge (grad_norm = {:.3e})", r.grad_norm),
                    code: 4,
                });
            }
            if output.json {
                let doc = json!({
                    "params": {
                        "alpha": r.params.alpha, "beta": r.params.beta, "mu": r.params.mu,
                        "sigma": r.params.sigma, "s": r.params.s,
                    },
                    "loglik": r.loglik,
                    "converged": r.converged,
                    "iterations": r.iterations,
                    "grad_norm": r.grad_norm,
                    "start_index": r.start_index,
                    "n": region.values.len(),
                    "rejected_pixels": region.rejected,
                });
                write_out(&output.out, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
            } else {
                let text = format!(
                    "alpha  {}\nbeta   {}\nmu     {}\nsigma  {}\ns      {}\n\
                     loglik {}\nconverged {}  iterations {}  grad_norm {:.3e}\n\
                     n {}  rejected_pixels {}\n",
                    report::sig6(r.params.alpha),
                    report::sig6(r.params.beta),
                    report::sig6(r.params.mu),
                    report::sig6(r.params.sigma),
                    report::sig6(r.params.s),
                    report::sig6(r.loglik),
                    r.converged,
                    r.iterations,
                    r.grad_norm,
                    region.values.len(),
                    region.rejected,
                );
                write_out(&output.out, &text)
            }
        }
        Cmd::Compare { input, fit, output } => {
            let region = input.load()?;
            let rep = compare(&region, &fit.options()).map_err(CliError::data)?;
            if fit.strict && rep.models.iter().any(|m| !m.converged) {
                return Err(CliError {
                    msg: "one or more models did not converge".into(),
                    code: 4,
                });
            }
            if output.json {
                write_out(
                    &output.out,
                    &format!("{}\n", serde_json::to_string_pretty(&rep).unwrap()),
                )
            } else {
                write_out(&output.out, &report::comparison_text(&rep))
            }
        }
        Cmd::Describe { input, output } => {
            let region = input.load()?;
            let d = describe(&region).map_err(CliError::data)?;
            if output.json {
                write_out(&output.out, &format!("{}\n", serde_json::to_string_pretty(&d).unwrap()))
            } else {
                write_out(
                    &output.out,
                    &format!(
                        "n      {}\nmean   {}\nmedian {}\nsd     {}\ncv%    {}\nrejected {}\n",
                        region.values.len(),
                        report::sig6(d.mean),
                        report::sig6(d.median),
                        report::sig6(d.sd),
                        report::sig6(d.cv),
                        region.rejected,
                    ),
                )
            }
        }
        Cmd::McStudy {
            replications,
            sizes,
            scenario,
            sweep,
            grid_points,
            seed,
            starts,
            output,
        } => {
            let sizes: Vec<usize> = {
                let mut out = Vec::new();
                for tok in sizes.split(',') {
                    out.push(tok.trim().parse().map_err(|_| {
                        CliError::usage(format!("bad sample size {tok:?} in --sizes"))
                    })?);
                }
                out
            };
            let cfg = McConfig {
                replications,
                sample_sizes: sizes,
                scenario: match scenario {
                    ScenarioArg::S => Scenario::VaryS,
                    ScenarioArg::Beta => Scenario::VaryBeta,
                    ScenarioArg::Alpha => Scenario::VaryAlpha,
                },
                sweep: parse_sweep(&sweep).map_err(|e| CliError::usage(e.to_string()))?,
                base: BgnParams::new(1.0, 1.0, 0.0, 1.0, 1.0).unwrap(),
                grid_points,
                seed,
                fit: FitOptions { n_starts: starts, max_iter: 300, ..Default::default() },
            };
            let rows = mc_study(&cfg).map_err(CliError::data)?;
            if output.json {
                write_out(&output.out, &format!("{}\n", serde_json::to_string_pretty(&rows).unwrap()))
            } else {
                write_out(&output.out, &report::mc_rows_text(&rows))
            }
        }
        Cmd::RngCheck { dist, n, bins, seed, output } => {
            let p = dist.params()?;
            let r = rng_check(&p, n, bins, seed).map_err(CliError::data)?;
            if output.json {
                write_out(&output.out, &format!("{}\n", serde_json::to_string_pretty(&r).unwrap()))
            } else {
                write_out(&output.out, &report::rng_check_text(&r))
            }
        }
    }
}

fn parse_list(spec: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for tok in spec.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        out.push(
            tok.parse::<f64>()
                .map_err(|_| CliError::usage(format!("not a number: {tok:?}")))?,
        );
    }
    if out.is_empty() {
        return Err(CliError::usage("empty value list".into()));
    }
    Ok(out)
}

fn parse_rect(spec: &str) -> Result<Rect, CliError> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 4 {
        return Err(CliError::usage(format!("--rect must be x0,y0,w,h, got {spec:?}")));
    }
    let nums: Result<Vec<u32>, _> = parts.iter().map(|p| p.trim().parse::<u32>()).collect();
    match nums {
        Ok(v) => Ok(Rect { x0: v[0], y0: v[1], width: v[2], height: v[3] }),
        Err(_) => Err(CliError::usage(format!("--rect must be four integers, got {spec:?}"))),
    }
}

fn eval_points(x: Option<&str>, grid: Option<&str>) -> Result<Vec<f64>, CliError> {
    match (x, grid) {
        (Some(list), None) => parse_list(list),
        (None, Some(g)) => {
            let parts: Vec<&str> = g.split(':').collect();
            if parts.len() != 3 {
                return Err(CliError::usage(format!("--grid must be lo:hi:count, got {g:?}")));
            }
            let lo: f64 =
                parts[0].parse().map_err(|_| CliError::usage("bad grid lo".into()))?;
            let hi: f64 =
                parts[1].parse().map_err(|_| CliError::usage("bad grid hi".into()))?;
            let count: usize =
                parts[2].parse().map_err(|_| CliError::usage("bad grid count".into()))?;
            if count < 2 || hi <= lo {
                return Err(CliError::usage("grid needs hi > lo and count >= 2".into()));
            }
            Ok((0..count)
                .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
                .collect())
        }
        _ => Err(CliError::usage("provide exactly one of --x or --grid".into())),
    }
}

fn emit_pairs(
    output: &OutputArgs,
    key: &str,
    val: &str,
    rows: &[(f64, f64)],
) -> Result<(), CliError> {
    if output.json {
        let items: Vec<serde_json::Value> =
            rows.iter().map(|(x, y)| json!({key: x, val: y})).collect();
        write_out(&output.out, &format!("{}\n", serde_json::to_string_pretty(&items).unwrap()))
    } else {
        let mut text = String::new();
        for (x, y) in rows {
            text.push_str(&format!("{x:.10e} {y:.10e}\n"));
        }
        write_out(&output.out, &text)
    }
}

fn write_out(path: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(p) => {
            let mut f = std::fs::File::create(p)
                .map_err(|e| CliError { msg: format!("cannot write {}: {e}", p.display()), code: 3 })?;
            f.write_all(content.as_bytes())
                .map_err(|e| CliError { msg: e.to_string(), code: 3 })?;
            Ok(())
        }
    }
}
