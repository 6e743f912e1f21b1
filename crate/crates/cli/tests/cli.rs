//! Runs the `brieskorn` binary end to end.

use std::process::{Command, Output};

use brieskorn_core::ab_module::ABModule;
use brieskorn_core::curve::InvariantReport;
use brieskorn_core::rational::qf;
use serde_json::Value;

const GOLDEN: [&str; 6] = ["--factors", "x:3", "--residual", "x^3+y^3", "--weights", "1,1"];

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brieskorn"))
        .args(args)
        .env_remove("BRIESKORN_JET_ORDER")
        .env_remove("BRIESKORN_WINDOW")
        .env_remove("BRIESKORN_TRUNC_ORDER")
        .env_remove("BRIESKORN_FORMAT")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn with(cmd: &str, extra: &[&str]) -> Vec<String> {
    std::iter::once(cmd).chain(GOLDEN).chain(extra.iter().copied()).map(String::from).collect()
}

fn run_owned(args: &[String]) -> Output {
    run(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

#[test]
fn invariants_report_for_the_golden_curve() {
    let out = run_owned(&with("invariants", &[]));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["tool"], "brieskorn");
    assert_eq!(v["command"], "invariants");
    assert_eq!((v["report"]["mu"].as_u64(), v["report"]["nu"].as_u64()), (Some(9), Some(4)));
    assert_eq!(v["report"]["rank"], 13);
    assert_eq!(v["report"]["saturated_jacobian"][0], "x^2");
    assert!(v.get("timing_ms").is_none());
    let report: InvariantReport = serde_json::from_value(v["report"].clone()).unwrap();
    assert!(report.is_consistent());
    assert_eq!(report.a_action.unwrap()[0].coefficient, qf(1, 3));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let a = run_owned(&with("invariants", &[]));
    let b = run_owned(&with("invariants", &[]));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn text_format_and_timing() {
    let out = run_owned(&with("invariants", &["--format", "text", "--timing"]));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("mu = 9"));
    assert!(text.contains("rank = 13"));
    assert!(text.contains("time: "));
}

#[test]
fn exit_codes() {
    let invalid = run(&["invariants", "--factors", "x:1"]);
    assert_eq!(invalid.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&invalid.stderr).contains("multiplicity"));
    assert_eq!(run(&["invariants", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let inconclusive = run_owned(&with("invariants", &["--jet-order", "4"]));
    assert_eq!(inconclusive.status.code(), Some(2));
    assert_eq!(run(&["suspend", "--isolated", "z", "--factors", "x:3", "--residual", "x^3+y^3"]).status.code(), Some(1));
}

#[test]
fn environment_overrides_defaults() {
    let out = Command::new(env!("CARGO_BIN_EXE_brieskorn"))
        .args(with("invariants", &[]))
        .env("BRIESKORN_JET_ORDER", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_brieskorn"))
        .args(with("invariants", &[]))
        .env("BRIESKORN_FORMAT", "text")
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("mu = 9"));
}

#[test]
fn suspension_ranks() {
    for (iso, rank) in [("z^2", 13), ("z^3", 26)] {
        let out = run_owned(&with("suspend", &["--isolated", iso]));
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let v = json(&out);
        assert_eq!(v["report"]["rank"], rank);
        assert_eq!(v["report"]["basis"].as_array().unwrap().len(), rank);
    }
    let out = run_owned(&with("suspend", &["--isolated", "z^2", "--verify-direct", "--jet-order", "14"]));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn abmod_commands() {
    let out = run(&["abmod", "lemma22", "--n", "5", "--format", "text"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "OK\n");

    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, m: &ABModule| {
        let path = dir.path().join(name);
        std::fs::write(&path, serde_json::to_string(&m.to_record()).unwrap()).unwrap();
        path.to_string_lossy().into_owned()
    };
    let left = write("left.json", &ABModule::rank_one(qf(1, 3), 12).unwrap());
    let right = write("right.json", &ABModule::diagonal(&[qf(1, 2), qf(2, 3)], 12, "F").unwrap());
    let product = dir.path().join("product.json").to_string_lossy().into_owned();
    let out = run(&["abmod", "tensor", &left, &right, "-o", &product]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let out = run(&["abmod", "check", &product]);
    let v = json(&out);
    assert_eq!(v["report"]["rank"], 2);
    assert_eq!(v["report"]["commutation"], true);
    assert_eq!(v["report"]["simple_pole"], true);

    assert_eq!(run(&["abmod", "check", "/nonexistent/module.json"]).status.code(), Some(1));
}
