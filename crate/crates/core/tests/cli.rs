use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn qinfo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qinfo")).args(args).output().expect("run qinfo")
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const ZERO_PLUS: &str = r#"{"dim": 2, "states": [[[1, 0], [0, 0]], [[0.7071067811865476, 0], [0.7071067811865476, 0]]], "probs": [0.5, 0.5]}"#;

#[test]
fn accessible_and_avg_info() {
    let v = json(&qinfo(&["accessible", "--dim", "2"]));
    assert_eq!(v["quantity"], "J");
    assert_eq!(v["dim"], 2);
    assert_eq!(v["value_bits"], 0.278652);
    assert_eq!(v["method"], "closed");

    let v = json(&qinfo(&["avg-info", "--dim", "3"]));
    assert_eq!(v["value_bits"], 1.20225);

    let v = json(&qinfo(&["avg-info", "--dim", "3", "--mc", "--samples", "20000", "--seed", "4"]));
    assert_eq!(v["method"], "mc");
    assert_eq!(v["consistent"], true);
    assert!((v["value_bits"].as_f64().unwrap() - 1.202).abs() < 0.02);
}

#[test]
fn volumes_and_microstates() {
    let v = json(&qinfo(&["volumes", "--dim", "2"]));
    assert_eq!(v["projective_volume"].to_string(), "3.14159");
    assert_eq!(v["resolution_volume"], 0.00306696);

    let v = json(&qinfo(&["microstates", "--dim", "16", "--bits", "10"]));
    assert_eq!(v["quantum_bits"], 150.0);
    assert_eq!(v["classical_bits"], 4.0);
    assert_eq!(v["resolution_angle_degrees"], 1.79049);

    let v = json(&qinfo(&["microstates", "--classical", "--dof", "3", "--area-ratio", "1024"]));
    assert_eq!(v["microstate_bits"], 30.0);
}

#[test]
fn clone_check_reports_violation() {
    let dir = TempDir::new().unwrap();
    let path = write(dir.path(), "e.json", ZERO_PLUS);
    let v = json(&qinfo(&["clone-check", "--ensemble", &path, "--copies", "1"]));
    assert_eq!(v["clonable"], false);
    assert_eq!(v["violating_pairs"][0]["j"], 0);
    assert_eq!(v["violating_pairs"][0]["k"], 1);
    assert_eq!(v["violating_pairs"][0]["violation"], 0.207107);

    let out = qinfo(&["clone-check", "--ensemble", &path, "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "clonable,copies,j,k,overlap_magnitude,violation\nfalse,1,0,1,0.707107,0.207107\n");
}

#[test]
fn entropy_and_schmidt() {
    let dir = TempDir::new().unwrap();
    let path = write(dir.path(), "e.json", ZERO_PLUS);
    let v = json(&qinfo(&["entropy", "--ensemble", &path]));
    assert_eq!(v["preparation_bits"], 1.0);
    assert_eq!(v["entropy_bits"], 0.600876);

    let bell = write(
        dir.path(),
        "bell.json",
        r#"{"dim": 4, "amplitudes": [[0.7071067811865476, 0], [0, 0], [0, 0], [0.7071067811865476, 0]]}"#,
    );
    let v = json(&qinfo(&["schmidt", "--state", &bell, "--dims", "2,2"]));
    assert_eq!(v["coefficients"], serde_json::json!([0.5, 0.5]));
    assert_eq!(v["entanglement_bits"], 1.0);
    assert_eq!(v["rank"], 2);
}

#[test]
fn commsim_config_and_counts() {
    let dir = TempDir::new().unwrap();
    let config = write(
        dir.path(),
        "c.json",
        &format!(r#"{{"ensemble": {ZERO_PLUS}, "dim": 2, "basis": "computational", "trials": 4000, "seed": 9}}"#),
    );
    let counts = dir.path().join("counts.csv");
    let out = qinfo(&["commsim", "--config", &config, "--counts", counts.to_str().unwrap()]);
    let v = json(&out);
    assert_eq!(v["method"], "exact");
    assert!(v["mutual_info_bits"].as_f64().unwrap() <= v["preparation_bits"].as_f64().unwrap());
    let table = fs::read_to_string(counts).unwrap();
    assert!(table.starts_with("input,outcome,count\n"));
    assert_eq!(table.lines().count(), 5);

    let uniform = write(dir.path(), "u.json", r#"{"ensemble": "uniform", "dim": 3, "trials": 5000, "seed": 2}"#);
    let v = json(&qinfo(&["commsim", "--config", &uniform]));
    assert_eq!(v["method"], "mc");
    assert_eq!(v["preparation_bits"], 20.0);
}

#[test]
fn exit_codes() {
    assert_eq!(qinfo(&["accessible", "--dim", "1"]).status.code(), Some(2));
    assert_eq!(qinfo(&["accessible"]).status.code(), Some(2));
    assert_eq!(qinfo(&["accessible", "--dim", "2", "--unknown"]).status.code(), Some(2));
    assert_eq!(qinfo(&["volumes", "--dim", "3", "--phi", "2.0"]).status.code(), Some(2));

    let dir = TempDir::new().unwrap();
    let broken = write(dir.path(), "bad.json", "{\"dim\": 2, ");
    assert_eq!(qinfo(&["entropy", "--ensemble", &broken]).status.code(), Some(2));
    let unnormalized = write(dir.path(), "u.json", r#"{"dim": 2, "states": [[[1, 0], [1, 0]]], "probs": [1]}"#);
    assert_eq!(qinfo(&["clone-check", "--ensemble", &unnormalized]).status.code(), Some(2));
    let extra = write(dir.path(), "x.json", r#"{"ensemble": "uniform", "dim": 2, "trials": 10, "colour": 1}"#);
    assert_eq!(qinfo(&["commsim", "--config", &extra]).status.code(), Some(2));
    let missing = dir.path().join("nope.json");
    assert_eq!(qinfo(&["entropy", "--ensemble", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn output_is_reproducible() {
    let args = ["avg-info", "--dim", "5", "--mc", "--samples", "10000", "--seed", "17"];
    let a = qinfo(&args);
    let b = qinfo(&args);
    let single = Command::new(env!("CARGO_BIN_EXE_qinfo")).args(args).env("QINFO_THREADS", "1").output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, single.stdout);

    let bad = Command::new(env!("CARGO_BIN_EXE_qinfo")).args(args).env("QINFO_THREADS", "0").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn output_flag_and_paper_table_csv() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("table.csv");
    let out = qinfo(&["paper-table", "--format", "csv", "--output", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(target).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("seed,all_passed,criterion,name,value,expected,rule,passed"));
    assert!(lines.all(|l| l.ends_with(",true")));
}
