//! End-to-end tests of the binary: exit codes, output formats, determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_recrob"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    let mut cmd = bin();
    cmd.args(args);
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn validate_accepts_the_sample_instance() {
    let out = run(&["validate", "--instance", data("boxes.json").to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "valid: n=2, scenarios=2, rhs_only=true, norm=BuiltinL1\n"
    );
}

#[test]
fn solve_eps_prints_the_solution_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let sol_path = dir.path().join("sol.json");
    let out = run(&[
        "solve-eps",
        "--instance",
        data("boxes.json").to_str().unwrap(),
        "--eps",
        "2.5",
        "--out",
        sol_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("r = 0.500000000000\n"), "{text}");
    assert!(text.contains("y[near] = "), "{text}");
    assert!(text.contains("z = 2.00000000000\n"), "{text}");

    let sol: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&sol_path).unwrap()).unwrap();
    assert_eq!(sol["radius"], 0.5);
    assert_eq!(sol["recoveries"].as_array().unwrap().len(), 2);
}

#[test]
fn infeasible_bounds_exit_one_structurally() {
    let out = run(&[
        "solve-eps",
        "--instance",
        data("boxes.json").to_str().unwrap(),
        "--eps",
        "-5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&[
        "solve-delta",
        "--instance",
        data("boxes.json").to_str().unwrap(),
        "--delta",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn format_and_usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"broken\": true}").unwrap();
    let out = run(&["validate", "--instance", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let missing = dir.path().join("missing.json");
    let out = run(&["validate", "--instance", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // clap usage error: no such flag.
    let out = run(&["solve-eps", "--banana"]);
    assert_eq!(out.status.code(), Some(2));

    // reduce requires exactly one mode flag.
    let out = run(&[
        "reduce",
        "--instance",
        data("boxes.json").to_str().unwrap(),
        "--relaxation",
        "--witness",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hyperplane_incircle_matches_the_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let sol_path = dir.path().join("center.json");
    let out = run(&[
        "solve-hyperplanes",
        "--instance",
        data("incircle.json").to_str().unwrap(),
        "--out",
        sol_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let sol: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&sol_path).unwrap()).unwrap();
    let x: Vec<f64> = sol["x"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    let expect = 2.0 - std::f64::consts::SQRT_2;
    assert!((x[0] - expect).abs() < 1e-9 && (x[1] - expect).abs() < 1e-9, "{x:?}");
    assert!((sol["radius"].as_f64().unwrap() - expect).abs() < 1e-9);
}

#[test]
fn pareto_csv_is_bit_identical_across_runs_and_jobs() {
    let instance = data("boxes.json");
    let args = [
        "pareto",
        "--instance",
        instance.to_str().unwrap(),
        "--points",
        "6",
        "--mode",
        "delta",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("bound,objective,radius\n"), "{text}");

    let mut jobs = args.to_vec();
    jobs.extend(["--jobs", "2"]);
    let c = run(&jobs);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn portfolio_csv_is_deterministic_and_seed_sensitive() {
    let args = [
        "portfolio", "--n", "4", "--N", "3", "--seed", "7", "--points", "4",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("bound,objective,radius,iterations,method\n"));

    // The env var beats the flag, so the front must change.
    let mut cmd = bin();
    cmd.args(args).env("RECROB_SEED", "8");
    let c = cmd.output().unwrap();
    assert!(c.status.success());
    assert_ne!(a.stdout, c.stdout);

    let mut jobs = args.to_vec();
    jobs.extend(["--jobs", "2"]);
    let d = run(&jobs);
    assert_eq!(a.stdout, d.stdout);
}

#[test]
fn reduce_writes_an_instance_the_binary_revalidates() {
    let dir = tempfile::tempdir().unwrap();
    let reduced = dir.path().join("reduced.json");
    let out = run(&[
        "reduce",
        "--instance",
        data("boxes.json").to_str().unwrap(),
        "--rhs-vertices",
        "--out",
        reduced.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("kept: near, far"));
    let out = run(&["validate", "--instance", reduced.to_str().unwrap()]);
    assert!(out.status.success());
}

#[test]
fn witness_lists_scenario_ids() {
    let out = run(&[
        "reduce",
        "--instance",
        data("boxes.json").to_str().unwrap(),
        "--witness",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "witness: near, far\n");
}
