use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const FEASIBLE: &str = r#"{
    "space": [{"id": "a1", "prob": 1.0}],
    "field": "real",
    "dim": 2,
    "functionals": [[[1, 0]], [[0, 1]]],
    "targets": [[3], [4]],
    "beta": [5],
    "epsilon": [0.1]
}"#;

const COMPLEX: &str = r#"{
    "space": [{"id": "a1", "prob": 0.25}, {"id": "a2", "prob": 0.75}],
    "field": "complex",
    "dim": 2,
    "functionals": [[[[1, 0], [0, 1]], [[2, -1], [0, 0]]]],
    "targets": [[[1, 1], [0.5, 0]]],
    "beta": [3, 3],
    "epsilon": [0.1, 0.1]
}"#;

fn rnm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rnm")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn solve_feasible_instance() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "i.json", FEASIBLE);
    let out = rnm(&["solve", "--instance", &path]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["report"]["result"]["solution"], serde_json::json!([[3.0, 4.0]]));
    assert_eq!(r["report"]["result"]["within_budget"], Value::Bool(true));
}

#[test]
fn solve_over_budget_reports_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "i.json", &FEASIBLE.replace(r#""beta": [5]"#, r#""beta": [4.9]"#));
    let out = rnm(&["solve", "--instance", &path]);
    assert_eq!(out.status.code(), Some(1));
    let cert = &report(&out)["report"]["result"]["certificate"];
    assert_eq!(cert["violation_set"], serde_json::json!(["a1"]));
    assert_eq!(cert["verified"], Value::Bool(true));
    let l: Vec<f64> = cert["lambdas"].as_array().unwrap().iter().map(|v| v[0].as_f64().unwrap()).collect();
    // λ ∝ (3, 4)
    assert!((l[0] * 4.0 - l[1] * 3.0).abs() < 1e-12);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "i.json", COMPLEX);
    let args = ["check", "--instance", &path, "--seed", "11", "--samples", "500"];
    let (a, b) = (rnm(&args), rnm(&args));
    assert_eq!(a.stdout, b.stdout);
    let threaded = rnm(&["check", "--instance", &path, "--seed", "11", "--samples", "500", "--jobs", "3"]);
    assert_eq!(a.stdout, threaded.stdout);
    let other_seed = rnm(&["check", "--instance", &path, "--seed", "12", "--samples", "500"]);
    assert_ne!(a.stdout, other_seed.stdout);
}

#[test]
fn echoed_instance_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "i.json", COMPLEX);
    let first = rnm(&["solve", "--instance", &path]);
    let echo = report(&first)["report"]["instance"].clone();
    let again = write(dir.path(), "echo.json", &serde_json::to_string(&echo).unwrap());
    let second = rnm(&["solve", "--instance", &again]);
    assert_eq!(report(&second)["report"]["instance"], echo);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn input_errors_point_at_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", &FEASIBLE.replace(r#"[[0, 1]]"#, r#"[[0, 1, 2]]"#));
    let out = rnm(&["solve", "--instance", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["report"]["error"]["pointer"], "functionals[1][0]");

    let schema = write(
        dir.path(),
        "schema.json",
        &FEASIBLE.replace(r#""field": "real""#, r#""field": "quaternion""#),
    );
    let out = rnm(&["solve", "--instance", &schema]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["report"]["error"]["pointer"], "field");

    let missing = rnm(&["solve", "--instance", "/nonexistent/instance.json"]);
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(rnm(&["solve"]).status.code(), Some(2));
}

#[test]
fn counterexample_is_infeasible_by_design() {
    let out = rnm(&["counterexample"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    let result = &r["report"]["result"];
    assert_eq!(result["condition"]["equality_holds"], 1000);
    assert_eq!(result["solution_impossible"]["concatenation"]["in_module"], false);
    assert_eq!(result["truncations"].as_array().unwrap().len(), 20);
}

#[test]
fn separation_and_gauge_commands() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "b.json",
        r#"{
            "space": [{"id": "a1", "prob": 0.5}, {"id": "a2", "prob": 0.5}],
            "field": "real",
            "dim": 2,
            "bodies": {
                "g": [{"ball": {"center": [0, 0], "radius": 1}}, {"ball": {"center": [0, 0], "radius": 2}}],
                "m": [{"hull": {"points": [[3, 0]]}}, {"hull": {"points": [[0.5, 0]]}}],
                "g_interior": true
            },
            "point": [[3, 4], [3, 4]]
        }"#,
    );
    let sep = rnm(&["separate", "--instance", &path]);
    assert_eq!(sep.status.code(), Some(0));
    assert_eq!(report(&sep)["report"]["result"]["set"], serde_json::json!(["a1"]));
    let gauge = rnm(&["gauge", "--instance", &path]);
    assert_eq!(report(&gauge)["report"]["result"]["gauge"], serde_json::json!([5.0, 2.5]));
}
