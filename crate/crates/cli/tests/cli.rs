use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const DIPOLE: &str = r#"{"kind":"graph","vertices":[{"id":0,"rotation":[0,1,2,3]},{"id":1,"rotation":[4,5,6,7]}],"edges":[[0,4],[1,5],[2,6],[3,7]],"externals":[]}"#;

fn run(args: &[&str], config: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_trailcount"));
    cmd.args(args).env_remove("TRAILCOUNT_CONFIG");
    if let Some(c) = config {
        cmd.env("TRAILCOUNT_CONFIG", c);
    }
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn count_dipole() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("dipole.json");
    std::fs::write(&f, DIPOLE).unwrap();
    let v = json(&run(&["count", f.to_str().unwrap(), "--mode", "et"], None));
    assert_eq!(v, serde_json::json!({"mode": "et", "count": "6"}));
}

#[test]
fn built_gadget_counts_back() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("xyy.json");
    let out = run(&["gadget", "build", "xyy", "--k", "2"], None);
    assert!(out.status.success());
    std::fs::write(&f, &out.stdout).unwrap();
    let v = json(&run(&["count", f.to_str().unwrap()], None));
    assert_eq!(v["total"], "8");
    assert_eq!(v["table"][0]["count"], "4");
}

#[test]
fn gadget_verify_passes() {
    for args in [&["gadget", "verify", "xyy", "--k", "3"][..], &["gadget", "verify", "smg"], &["gadget", "verify", "sgg"]] {
        let out = run(args, None);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn region_and_glue() {
    let v = json(&run(&["sig", "region", "1/3", "1/3", "1/3"], None));
    assert_eq!(v["class"], "inside");
    let v = json(&run(&["sig", "glue", "1/2,1/2,0", "1/2,1/2,0"], None));
    assert_eq!(v["signature"]["alpha"], "2/3");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{bad").unwrap();
    assert_eq!(run(&["count", bad.to_str().unwrap()], None).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"], None).status.code(), Some(2));
    assert_eq!(run(&["sig", "region", "1", "1", "1"], None).status.code(), Some(2));
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"sed": 1}"#).unwrap();
    assert_eq!(run(&["sig", "constants"], Some(&cfg)).status.code(), Some(2));
    std::fs::write(&cfg, r#"{"precision": 0}"#).unwrap();
    assert_eq!(run(&["sig", "constants"], Some(&cfg)).status.code(), Some(2));
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"precision": 0}"#).unwrap();
    assert!(run(&["sig", "constants", "--prec", "96"], Some(&cfg)).status.success());
}

#[test]
fn output_independent_of_thread_count() {
    for args in [&["experiment", "region-scan", "--n", "3", "--dedup"][..], &["experiment", "closure", "--trials", "300", "--csv"]] {
        let one = run(&[args, &["--threads", "1", "--seed", "7"]].concat(), None);
        let four = run(&[args, &["--threads", "4", "--seed", "7"]].concat(), None);
        assert!(one.status.success());
        assert_eq!(one.stdout, four.stdout, "{args:?}");
    }
}
