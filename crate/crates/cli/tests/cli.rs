//! End-to-end tests of the binary: documents, exit codes, determinism.

use std::process::{Command, Output};

fn psi_point(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psi-point"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("valid JSON document")
}

#[test]
fn npoint_document_contains_tau0_cubed() {
    let out = psi_point(&["npoint", "--n", "3", "--order", "6", "--format", "json"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["n"], 3);
    assert_eq!(doc["order"], 6);
    let entries = doc["entries"].as_array().unwrap();
    let origin = entries
        .iter()
        .find(|e| e["d"] == serde_json::json!([0, 0, 0]))
        .expect("entry for d=(0,0,0)");
    assert_eq!(origin["g"], 0);
    assert_eq!(origin["value"], "1");
}

#[test]
fn npoint_csv_schema() {
    let out = psi_point(&["npoint", "--n", "2", "--order", "5", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("g,d1,d2,value"));
    assert!(text.lines().any(|l| l == "1,1,1,1/24"));
}

#[test]
fn npoint_output_is_byte_stable() {
    let first = psi_point(&["npoint", "--n", "3", "--order", "3"]);
    let second = psi_point(&["npoint", "--n", "3", "--order", "3"]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn intersect_with_oracle_check() {
    let out = psi_point(&["intersect", "--g", "2", "--d", "4", "--check", "oracle"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["value"], "1/1152");
    assert_eq!(doc["check"], "ok");
}

#[test]
fn dr_integral_value() {
    let out = psi_point(&["dr", "--a", "3,-3", "--d", "1,0"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["value"], "1/3");
}

#[test]
fn drpush_reports_both_routes() {
    let out = psi_point(&["drpush", "--a", "1,1,-3", "--b", "1", "--d", "3,0,0"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["series_value"], doc["direct_value"]);
    assert_eq!(doc["agree"], true);
}

#[test]
fn pn_kernel_coefficients() {
    let out = psi_point(&["pn", "--a", "1,-1", "--order", "2"]);
    let doc = stdout_json(&out);
    let entries = doc["entries"].as_array().unwrap();
    let constant = entries
        .iter()
        .find(|e| e["d"] == serde_json::json!([0, 0]))
        .unwrap();
    assert_eq!(constant["value"], "1");
    let cross = entries
        .iter()
        .find(|e| e["d"] == serde_json::json!([1, 1]))
        .unwrap();
    assert_eq!(cross["value"], "1/12");
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("psi-point-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.json");
    let out = psi_point(&[
        "npoint",
        "--n",
        "1",
        "--order",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["entries"][0]["value"], "1/24");
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn selftest_quick_passes() {
    let out = psi_point(&["selftest", "--level", "quick"]);
    assert!(
        out.status.success(),
        "stdout: {}",
        String::from_utf8_lossy(&out.stdout)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0 failures"));
}

#[test]
fn usage_errors_exit_one() {
    let out = psi_point(&["npoint", "--n", "3"]); // missing --order
    assert_eq!(out.status.code(), Some(1));
    let out = psi_point(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));
    // rejected input (unbalanced weights) is also a usage error
    let out = psi_point(&["dr", "--a", "1,2", "--d", "0,0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let out = psi_point(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn parallelism_flag_accepted() {
    let out = psi_point(&["--parallelism", "2", "intersect", "--g", "1", "--d", "1"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["value"], "1/24");
}
