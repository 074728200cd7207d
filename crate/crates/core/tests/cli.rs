use std::process::Command;

use nbc_core::cli::run;
use serde_json::Value;

fn nbc(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["nbc"];
    full.extend_from_slice(args);
    let inv = run(full);
    let v = if inv.stdout.is_empty() { Value::Null } else { serde_json::from_str(&inv.stdout).unwrap() };
    (inv.code, v)
}

#[test]
fn face_numbers_k3() {
    let (code, v) = nbc(&["face-numbers", "--graph", "complete:3"]);
    assert_eq!(code, 0);
    assert_eq!(v["n"], serde_json::json!([1, 3, 2]));
    assert_eq!(v["log_concave"], Value::Bool(true));
    assert_eq!(v["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn walk_gap_k3() {
    let (_, v) = nbc(&["walk-gap", "--graph", "complete:3"]);
    assert_eq!(v["gap"].as_f64(), Some(0.5));
    assert_eq!(v["ltg_bound"].as_f64(), Some(0.5));
    let (_, v) = nbc(&["walk-gap", "--graph", "complete:3", "--bases"]);
    assert_eq!(v["gap"].as_f64(), Some(0.75));
}

#[test]
fn gadget_link_report() {
    let (code, v) = nbc(&["gadget", "link", "--n", "2", "--l", "2", "--report"]);
    assert_eq!(code, 0);
    assert_eq!(v["S_A_n"], 4);
    assert_eq!(v["claim_disjoint"], true);
    assert_eq!(v["truncation_rank"], 11);
    assert_eq!(v["mixing_bound"], "12/1");
}

#[test]
fn long_edge_report() {
    let (_, v) = nbc(&["gadget", "long-edge", "--n", "5"]);
    assert_eq!(v["weights"], serde_json::json!(["0/1", "1/1", "0/1", "1/1", "2/1"]));
    assert_eq!(v["certified"], true);
    assert_eq!(v["squared_distance"], 4);
}

#[test]
fn instance_file_with_order_and_weights() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k3.json");
    std::fs::write(&path, r#"{"vertices": 3, "edges": [[0,1],[0,2],[1,2]], "order": [2,1,0]}"#).unwrap();
    let p = path.to_str().unwrap();
    let (code, v) = nbc(&["nbc-bases", "--input", p]);
    assert_eq!(code, 0);
    assert_eq!(v["bases"], serde_json::json!([[0, 2], [1, 2]]));

    let opt = dir.path().join("p3.json");
    std::fs::write(&opt, r#"{"vertices": 3, "edges": [[0,1],[1,2]], "weights": ["1", "1", "1/2"]}"#).unwrap();
    let (_, v) = nbc(&["reduce", "opt", "--input", opt.to_str().unwrap()]);
    assert_eq!(v["independent_set_weight"], "3/2");
    assert_eq!(v["equal"], true);
}

#[test]
fn sandwich_commands() {
    let (_, v) = nbc(&["reduce", "count", "--graph", "cycle:5", "--m", "2", "--l", "20"]);
    assert_eq!((v["lower_bound"].as_str(), v["upper_bound"].as_str()), (Some("2000/1"), Some("4000/1")));
    assert_eq!(v["verdict"], true);
    let (_, v) = nbc(&["reduce", "field", "--graph", "cycle:5", "--m", "2", "--l", "10"]);
    assert_eq!(v["verdict"], true);
}

#[test]
fn oracles() {
    let (_, v) = nbc(&["oracle", "chromatic", "--graph", "complete:3"]);
    assert_eq!(v["coefficients"], serde_json::json!(["0", "2", "-3", "1"]));
    let (_, v) = nbc(&["oracle", "parking", "--graph", "complete:3"]);
    assert_eq!((v["count"].as_u64(), v["nbc_bases"].as_u64()), (Some(3), Some(2)));
    let (_, v) = nbc(&["oracle", "hardcore", "--graph", "path:2", "--fugacity", "1/2"]);
    assert_eq!(v["partition_function"], "2/1");
    let (_, v) = nbc(&["reduce", "hardcore", "--graph", "complete:3", "--r", "2"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["vertices"], 19);
}

#[test]
fn exit_codes() {
    assert_eq!(nbc(&["face-numbers", "--graph", "wheel:5"]).0, 1);
    assert_eq!(nbc(&["no-such-command"]).0, 1);
    assert_eq!(nbc(&["face-numbers"]).0, 1);
    assert_eq!(nbc(&["link", "--graph", "complete:3", "--tau", "1,2"]).0, 2);
    assert_eq!(nbc(&["oracle", "chromatic", "--graph", "complete:8"]).0, 3);
    assert_eq!(nbc(&["--force-size", "oracle", "acyclic", "--graph", "complete:6"]).0, 0);
    let inv = run(["nbc", "face-numbers", "--graph", "cycle:2"]);
    assert_eq!(inv.stderr.lines().count(), 1);
}

#[test]
fn output_is_deterministic_and_mirrored() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let args = ["nbc", "local-profile", "--graph", "complete:4", "--out", out.to_str().unwrap()];
    let a = run(args);
    let b = run(args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), a.stdout);
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_nbc");
    let ok = Command::new(bin).args(["face-numbers", "--graph", "cycle:4"]).output().unwrap();
    assert!(ok.status.success());
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["n"], serde_json::json!([1, 4, 6, 3]));
    let guard = Command::new(bin).args(["oracle", "indep", "--graph", "edgeless:40"]).output().unwrap();
    assert_eq!(guard.status.code(), Some(3));
}

#[test]
fn verify_single_suite() {
    let (code, v) = nbc(&["verify", "long-edge"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(nbc(&["verify", "bogus"]).0, 1);
}
