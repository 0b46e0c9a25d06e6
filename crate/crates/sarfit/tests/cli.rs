//! End-to-end checks of the command-line interface and its exit codes.

use std::process::Command;

fn sarfit() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sarfit"))
}

fn stdout_of(args: &[&str]) -> String {
    let out = sarfit().args(args).output().expect("spawn sarfit");
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn pdf_reduces_to_normal_value() {
    let text = stdout_of(&[
        "pdf", "--alpha", "1", "--beta", "1", "--mu", "0", "--sigma", "1", "--s", "2", "--x",
        "0",
    ]);
    let val: f64 = text.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((val - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-12);
}

#[test]
fn cdf_at_location_is_half() {
    let text = stdout_of(&["cdf", "--mu", "3", "--x", "3"]);
    let val: f64 = text.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((val - 0.5).abs() < 1e-12);
}

#[test]
fn quantile_json_round_trip() {
    let text = stdout_of(&["quantile", "--p", "0.3", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let q = doc[0]["quantile"].as_f64().unwrap();
    let text2 = stdout_of(&["cdf", "--x", &format!("{q}")]);
    let back: f64 = text2.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((back - 0.3).abs() < 1e-8);
}

#[test]
fn sample_describe_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let sample_path = dir.path().join("sample.csv");
    // shift so all values are positive intensities
    let out = sarfit()
        .args([
            "sample", "--mu", "10", "--sigma", "0.5", "--n", "500", "--seed", "7", "--out",
            sample_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout_of(&[
        "describe",
        "--input",
        sample_path.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(text.contains("mean"), "{text}");
    let mean_line = text.lines().find(|l| l.starts_with("mean")).unwrap();
    let mean: f64 = mean_line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((mean - 10.0).abs() < 0.2, "mean = {mean}");
}

#[test]
fn sample_is_deterministic_across_invocations() {
    let a = stdout_of(&["sample", "--n", "5", "--seed", "42"]);
    let b = stdout_of(&["sample", "--n", "5", "--seed", "42"]);
    assert_eq!(a, b);
    let c = stdout_of(&["sample", "--n", "5", "--seed", "43"]);
    assert_ne!(a, c);
}

#[test]
fn missing_input_is_a_data_error() {
    let out = sarfit()
        .args(["describe", "--input", "/nonexistent/file.csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn bad_parameters_are_usage_errors() {
    // negative sigma: our validation, exit 2
    let out = sarfit().args(["pdf", "--sigma", "-1", "--x", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // unknown flag: clap usage error, exit 2
    let out = sarfit().args(["pdf", "--nope", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // missing --x/--grid
    let out = sarfit().args(["pdf"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn strict_fit_reports_convergence_failures() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("data.csv");
    // tiny pathological sample with one iteration allowed
    let mut rows = String::new();
    for i in 0..40 {
        rows.push_str(&format!("{}\n", 1.0 + (i % 7) as f64));
    }
    std::fs::write(&path, rows).unwrap();
    let out = sarfit()
        .args([
            "fit", "--input", path.to_str().unwrap(), "--max-iter", "1", "--starts", "1",
            "--strict",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn rng_check_reports_ks() {
    let text = stdout_of(&["rng-check", "--n", "2000", "--bins", "10", "--seed", "3"]);
    assert!(text.starts_with("ks_stat"), "{text}");
}

#[test]
fn mc_study_small_run_and_json() {
    let text = stdout_of(&[
        "mc-study",
        "--replications",
        "2",
        "--sizes",
        "49",
        "--scenario",
        "beta",
        "--sweep",
        "1:2:1",
        "--grid-points",
        "64",
        "--seed",
        "5",
        "--starts",
        "1",
        "--json",
    ]);
    let rows: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 2);
}
