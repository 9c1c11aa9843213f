use std::process::Command;

use serde_json::Value;

fn qboson(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qboson")).args(args).output().expect("binary runs")
}

#[test]
fn verify_reports_success_as_json() {
    let out = qboson(&["--n", "2", "--q", "1/2", "--seed", "7", "verify", "--trials", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["passed"], true);
    assert!(report["checks"].as_array().unwrap().len() >= 10);
}

#[test]
fn verify_is_deterministic() {
    let args = ["--n", "2", "--window", "-2:2", "verify", "--suite", "oracle,adjointness", "--trials", "5"];
    assert_eq!(qboson(&args).stdout, qboson(&args).stdout);
}

#[test]
fn corrupted_coefficients_fail_with_a_witness() {
    let out = qboson(&["--n", "2", "verify", "--suite", "oracle", "--trials", "5", "--corrupt-v"]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let check = &report["checks"][0];
    assert!(check["failures"].as_u64().unwrap() > 0);
    assert!(check["witness"]["witness"]["lambda"].is_array());
}

#[test]
fn orthogonality_writes_ladder() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("orth.json");
    let out = qboson(&[
        "--n", "2", "--q", "0.5", "--quad-order", "48", "--out", path.to_str().unwrap(),
        "orthogonality", "--lambda", "2,1", "--mu", "2,1",
    ]);
    assert!(out.status.success());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["ladder"].as_array().unwrap().len(), 4);
    assert!(report["abs_error"].as_f64().unwrap() < 1e-6);
}

#[test]
fn scatter_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("scan.csv");
    let manifest = dir.path().join("scan.json");
    let out = qboson(&[
        "--q", "0.5", "--quad-order", "16", "--time-list", "5", "--out", csv_path.to_str().unwrap(),
        "scatter", "--manifest", manifest.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = table.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,norm_fplus_minus_f0,norm_fminus_minus_f0,norm_f0_minus_fclas,norm_fpm"
    );
    assert_eq!(lines.count(), 1);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["packet"]["sigma"].as_array().unwrap().len(), 2);
}

#[test]
fn scatter_rejects_packets_touching_a_wall() {
    let out = qboson(&["--q", "0.5", "--packet-center", "0.5,0.4", "scatter"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("regular-domain"));
}

#[test]
fn evolve_warns_about_small_windows() {
    let dir = tempfile::tempdir().unwrap();
    let snaps = dir.path().join("snaps.json");
    let out = qboson(&[
        "--q", "0.5", "--window", "-4:4", "--quad-order", "16", "--time-list", "0,6",
        "evolve", "--snapshots", snaps.to_str().unwrap(),
    ]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.starts_with("t,norm,norm_ratio"));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&snaps).unwrap()).unwrap();
    assert_eq!(doc["snapshots"].as_array().unwrap().len(), 2);
}

#[test]
fn invalid_arguments_exit_nonzero() {
    assert_eq!(qboson(&["--q", "2/1", "verify"]).status.code(), Some(2));
    assert_eq!(qboson(&["--q", "0.5", "verify"]).status.code(), Some(2));
    assert!(!qboson(&["frobnicate"]).status.success());
}
