use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

const WORKED: &str = "0 1 0\n1 0 0\n0 0 0\n";
const SMALL: &str = "0 1 0\n0 0 0\n1 0 0\n";
const GR2: &str = "1 0 0 0\n0 0 1 0\n0 0 0 0\n";
const TWIN: &str = "1 0 0 0 0\n0 0 1 0 0\n0 0 0 0 1\n0 1 0 0 0\n";
const SEVEN_BY_EIGHT: &str = "0 0 0 0 0 0 1 0\n0 0 0 0 0 0 0 0\n0 0 0 0 1 0 0 0\n0 0 0 0 0 0 0 1\n\
                              1 0 0 0 0 0 0 0\n0 0 1 0 0 0 0 0\n0 0 0 0 0 1 0 0\n";

fn input(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn run(args: &[&str], text: &str) -> Output {
    let f = input(text);
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_schubert"));
    cmd.arg(args[0]).arg(f.path()).args(&args[1..]);
    cmd.output().unwrap()
}

fn json(args: &[&str], text: &str) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all, text);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_worked_example_is_non_minimal_with_certificate() {
    let r = json(&["analyze"], WORKED);
    assert_eq!(r["verdict"], "non-minimal");
    assert_eq!(r["evidence"]["kind"], "witness");
    assert_eq!(r["evidence"]["certificate"]["cell"], serde_json::json!([3, 3]));
    assert_eq!(r["classification"]["vexillary"], false);
    assert!(r["tool_version"].as_str().unwrap().starts_with("schubert "));
}

#[test]
fn analyze_small_vexillary_example() {
    let r = json(&["analyze"], SMALL);
    assert_eq!(r["classification"]["vexillary"], true);
    assert_eq!(r["diagram"]["components"].as_array().unwrap().len(), 2);
    assert_eq!(r["verdict"], "minimal");
    assert!(r["evidence"]["proof_path"].is_string());
}

#[test]
fn analyze_identity_has_empty_diagram() {
    let r = json(&["analyze"], "1 0 0\n0 1 0\n0 0 1\n");
    assert!(r["diagram"]["cells"].as_array().unwrap().is_empty());
    assert_eq!(r["verdict"], "minimal");
}

#[test]
fn witness_trace_at_unit_parameters() {
    let r = json(&["witness", "--y", "1,1,1"], WORKED);
    let cert = &r["evidence"]["certificate"];
    assert_eq!(cert["numeric_trace"], "2/5");
    assert_eq!(cert["L"], 1);
    assert_eq!(cert["y"], serde_json::json!(["1", "1", "1"]));
}

#[test]
fn witness_rejects_vexillary_input() {
    let out = run(&["witness"], SMALL);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("vexillary"));
}

#[test]
fn witness_rejects_zero_parameter() {
    let out = run(&["witness", "--y", "1,0,1"], WORKED);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_input_exits_with_input_error() {
    for bad in ["1 1\n0 0\n", "1 0\n0\n", "2 0\n0 1\n", ""] {
        let out = run(&["analyze"], bad);
        assert_eq!(out.status.code(), Some(2), "{bad:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_schubert"))
        .args(["analyze", "/nonexistent/input.txt"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_gr2_example_is_stationary_everywhere() {
    let r = json(&["verify"], GR2);
    assert_eq!(r["verdict"], "minimal");
    assert_eq!(r["evidence"]["stationary"], 20);
    assert_eq!(r["evidence"]["gr2"]["checks"]["obstruction_zero"], true);
}

#[test]
fn verify_twin_runs_on_the_gr2_partner() {
    let r = json(&["verify", "--samples", "5"], TWIN);
    assert_eq!(r["verdict"], "minimal");
    assert_eq!(r["classification"]["in_gr2"], false);
    assert_eq!(r["evidence"]["stationary"], 5);
    assert!(r["evidence"]["note"].as_str().unwrap().contains("congruent"));
}

#[test]
fn verify_seven_by_eight_reports_decomposition_tree() {
    let r = json(&["verify", "--samples", "10"], SEVEN_BY_EIGHT);
    assert_eq!(r["verdict"], "minimal");
    let dec = &r["evidence"]["decomposition"];
    assert_eq!(dec["decomposition"]["factors"].as_array().unwrap().len(), 3);
    assert_eq!(dec["decomposition"]["free"].as_array().unwrap().len(), 16);
    assert_eq!(dec["composite"]["stationary"], 10);
}

#[test]
fn verify_non_vexillary_attaches_certificate() {
    let r = json(&["verify"], WORKED);
    assert_eq!(r["verdict"], "non-minimal");
    assert!(r["evidence"]["certificate"]["numeric_trace"].is_string());
    assert!(r["evidence"]["stationary"].as_u64().unwrap() < 20);
}

#[test]
fn decompose_requires_decomposable_input() {
    assert_eq!(run(&["decompose"], WORKED).status.code(), Some(4));
    let r = json(&["decompose", "--samples", "3"], SMALL);
    assert_eq!(r["evidence"]["kind"], "decomposition");
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let a = run(&["verify", "--json", "--seed", "5", "--samples", "4"], WORKED);
    let b = run(&["verify", "--json", "--seed", "5", "--samples", "4"], WORKED);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
    assert_eq!(v["seed"], 5);
}

#[test]
fn text_output_names_the_verdict() {
    let out = run(&["analyze"], WORKED);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("verdict: non-minimal"));
}

#[test]
fn selfcheck_small_sizes_pass() {
    for k in ["1", "3"] {
        let out = Command::new(env!("CARGO_BIN_EXE_schubert"))
            .args(["selfcheck", "--max-size", k, "--samples", "3", "--json"])
            .output()
            .unwrap();
        assert!(out.status.success(), "K = {k}");
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["passed"], true);
        assert_eq!(v["suites"].as_array().unwrap().len(), 5);
    }
}
