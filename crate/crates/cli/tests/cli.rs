use std::process::{Command, Output};

use serde_json::Value;

fn fpalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpalg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("json on stderr")
}

const Z: &str = r#"{"coeffs": [[0, 0], [1, 0]]}"#;
const Z2_PLUS_1: &str = r#"{"coeffs": [[1, 0], [0, 0], [1, 0]]}"#;

#[test]
fn coefficient_seminorm_of_z() {
    let v = stdout_json(&fpalg(&["seminorm", "--p", "2", "--c", "1", "--family", "coeff", "--series", Z]));
    assert!((v["value"].as_f64().unwrap() - (-1f64).exp()).abs() < 1e-15);
    assert_eq!(v["residual"].as_f64(), Some(0.0));
}

#[test]
fn integral_seminorm_of_one() {
    let v = stdout_json(&fpalg(&[
        "seminorm", "--p", "2", "--c", "1", "--family", "integral", "--series", r#"{"coeffs": [[1, 0]]}"#,
    ]));
    // E_1(1)
    assert!((v["value"].as_f64().unwrap() - 0.219_383_934_395_520_3).abs() < 1e-9);
}

#[test]
fn ideal_check_reports_the_value() {
    let v = stdout_json(&fpalg(&["ideal-check", "--lambda", "0.5,0", "--tol", "1e-12", "--series", Z2_PLUS_1]));
    assert_eq!(v["contains"], Value::Bool(false));
    assert_eq!(v["value"], serde_json::json!([1.25, 0.0]));
    let v = stdout_json(&fpalg(&[
        "ideal-check", "--lambda", "-0.5", "--series", r#"{"coeffs": [[0.5, 0], [1, 0]]}"#,
    ]));
    assert_eq!(v["contains"], Value::Bool(true));
}

#[test]
fn factor_emits_series_json() {
    let v = stdout_json(&fpalg(&["factor", "--lambda", "0.5,0", "--series", Z2_PLUS_1]));
    assert_eq!(v, serde_json::json!({"coeffs": [[0.5, 0.0], [1.0, 0.0]]}));
}

#[test]
fn quotient_norm_regimes() {
    let above = stdout_json(&fpalg(&["quotient-norm", "--lambda", "0.5,0", "--r", "0.7", "--series", Z2_PLUS_1]));
    assert_eq!(above["lower"], above["upper"]);
    assert_eq!(above["lower"].as_f64(), Some(1.25));
    let below = stdout_json(&fpalg(&[
        "quotient-norm", "--lambda", "0.5,0", "--r", "0.2", "--kbudget", "8", "--series", Z2_PLUS_1,
    ]));
    assert_eq!(below["lower"].as_f64(), Some(0.0));
    assert_eq!(below["witness_k"].as_u64(), Some(8));
}

#[test]
fn metrics() {
    let one = r#"{"coeffs": [[1, 0], [0.5, 0]]}"#;
    let zero = r#"{"coeffs": [[0, 0], [0.5, 0]]}"#;
    let d = stdout_json(&fpalg(&["metric", "--p", "3", "--series", one, "--other", zero]));
    assert!((d["value"].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-10);
    let l = stdout_json(&fpalg(&["metric", "--p", "3", "--kind", "envelope", "--series", one, "--other", zero]));
    assert!(l["value"].as_f64().unwrap() < 1.0);
    assert_eq!(l["terms"].as_u64(), Some(41));
}

#[test]
fn classify_emits_verdict_and_profile() {
    let v = stdout_json(&fpalg(&[
        "classify", "--rule", "stretched-exp", "--params", "0.1,0.3333333333333333", "--p", "2", "--nmax", "4096",
    ]));
    assert_eq!(v["verdict"], "NotInFp");
    assert_eq!(v["profile"].as_array().unwrap().len(), 4096);
    let v = stdout_json(&fpalg(&["classify", "--rule", "geometric", "--params", "1", "--p", "2"]));
    assert_eq!(v["verdict"], "InFp");
}

#[test]
fn usage_errors_exit_2_with_json() {
    for args in [
        vec!["seminorm", "--p", "1", "--c", "1", "--series", Z],
        vec!["seminorm", "--p", "2", "--c", "-1", "--series", Z],
        vec!["ideal-check", "--lambda", "1.0,0", "--series", Z],
        vec!["seminorm", "--p", "2", "--c", "1", "--series", "/nonexistent/file.json"],
        vec!["seminorm", "--p", "2", "--c", "1", "--series", r#"{"coeffs": []}"#],
        vec!["nonsense"],
        vec!["classify", "--rule", "geometric", "--params", "1,2", "--p", "2"],
    ] {
        let out = fpalg(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(stderr_json(&out)["error"], "usage", "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn accuracy_failure_exits_3() {
    let out = fpalg(&[
        "seminorm", "--p", "2", "--c", "1", "--family", "integral", "--tol", "1e-30", "--series", Z2_PLUS_1,
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = stderr_json(&out);
    assert_eq!(err["error"], "accuracy");
    assert!(err["residual"].as_f64().unwrap().is_finite());
}

#[test]
fn series_can_come_from_a_file_and_go_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("f.json");
    std::fs::write(&input, Z2_PLUS_1).unwrap();
    let out = dir.path().join("a.json");
    let status = fpalg(&[
        "factor", "--lambda", "0,0.5", "--series", input.to_str().unwrap(), "--out", out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    assert!(status.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["coeffs"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_t3_first_has_no_violations() {
    let v = stdout_json(&fpalg(&[
        "verify", "--theorem", "t3-first", "--seed", "7", "--corpus-size", "1000", "--p", "2", "--c", "1",
    ]));
    assert_eq!(v["failed"].as_u64(), Some(0));
    assert_eq!(v["checked"].as_u64(), Some(1000));
    assert_eq!(v["seed"].as_u64(), Some(7));
}

#[test]
fn verify_reports_are_byte_identical_and_csv_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("margins.csv");
    let args = [
        "verify", "--theorem", "functional", "--seed", "11", "--corpus-size", "50", "--lambda", "-0.3,0.6",
    ];
    let a = fpalg(&args);
    let b = fpalg(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let mut with_csv = args.to_vec();
    with_csv.extend(["--csv", csv.to_str().unwrap()]);
    assert_eq!(fpalg(&with_csv).stdout, a.stdout);
    assert_eq!(std::fs::read_to_string(csv).unwrap().lines().count(), 51);
}

#[test]
fn gen_corpus_is_reproducible() {
    let args = ["gen-corpus", "--seed", "5", "--corpus-size", "4", "--max-degree", "8"];
    let a = fpalg(&args);
    assert_eq!(a.stdout, fpalg(&args).stdout);
    let v = stdout_json(&a);
    assert_eq!(v["entries"].as_array().unwrap().len(), 4);
    assert_eq!(v["seed"].as_u64(), Some(5));
}

#[test]
fn help_exits_zero() {
    assert!(fpalg(&["--help"]).status.success());
}
