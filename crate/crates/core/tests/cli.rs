mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn gstable(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gstable")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gstable-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_problem(dir: &Path, name: &str) -> PathBuf {
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, serde_json::to_string(&common::instance(name).spec).unwrap()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_then_verify() {
    let dir = scratch("analyze");
    let spec = write_problem(&dir, "z4-z2-sign-gf5");
    let out = dir.join("report.json");
    let run = gstable(&["analyze", s(&spec), "--out", s(&out)]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).contains("extends to G: true"));
    let check = gstable(&["verify", s(&out)]);
    assert_eq!(check.status.code(), Some(0));
    assert!(!String::from_utf8_lossy(&check.stdout).contains("FAIL"));
}

#[test]
fn negative_verdict_exits_one() {
    let dir = scratch("negative");
    let spec = write_problem(&dir, "heis2-central-jordan");
    let run = gstable(&["analyze", s(&spec), "--seed", "5"]);
    assert_eq!(run.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(report["obstruction"]["trivial"], serde_json::json!(false));
    assert_eq!(report["problem"]["seed"], serde_json::json!(5));
}

#[test]
fn tampered_report_fails_verification() {
    let dir = scratch("tamper");
    let spec = write_problem(&dir, "heis2-central-jordan");
    let out = dir.join("report.json");
    gstable(&["analyze", s(&spec), "--out", s(&out)]);
    let mut report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let entry = &mut report["stability"]["numerical"]["iso"]["entries"][0];
    *entry = serde_json::json!(1 - entry.as_u64().unwrap());
    std::fs::write(&out, report.to_string()).unwrap();
    let check = gstable(&["verify", s(&out)]);
    assert_eq!(check.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&check.stdout).contains("FAIL stability.numerical"));
}

#[test]
fn errors_exit_two_with_a_field_path() {
    let dir = scratch("errors");
    let mut spec = common::instance("heis2-central-jordan").spec;
    spec.p = 9;
    let path = dir.join("bad.json");
    std::fs::write(&path, serde_json::to_string(&spec).unwrap()).unwrap();
    let run = gstable(&["analyze", s(&path)]);
    assert_eq!(run.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&run.stderr).unwrap();
    assert_eq!(err["path"], "p");

    let missing = gstable(&["verify", s(&dir.join("missing.json"))]);
    assert_eq!(missing.status.code(), Some(2));

    let small = write_problem(&dir, "s4-v4-perm-gf2");
    let capped = gstable(&["analyze", s(&small), "--cap", "12"]);
    assert_eq!(capped.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("size-limit"));
}

#[test]
fn corpus_runs_and_emits() {
    let dir = scratch("corpus");
    let run = gstable(&["corpus", "--filter", "z4-z2", "--emit", s(&dir)]);
    assert_eq!(run.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.contains("3 of 3 instances as expected"), "{stdout}");
    let report = dir.join("z4-z2-sign-gf5.report.json");
    assert_eq!(gstable(&["verify", s(&report)]).status.code(), Some(0));
}

#[test]
fn schreier_system_from_json() {
    let dir = scratch("schreier");
    let c2 = serde_json::json!({"domain": 2, "generators": [[1, 0]]});
    // Z/2 by Z/2 with γ(t, t) the generator of U: the cyclic group of order 4.
    let system = serde_json::json!({
        "schema": "gstable.schreier/1",
        "base": c2,
        "coeff": {"kind": "enumerated", "group": c2},
        "kappa": [0, 1, 0, 1],
        "gamma": [0, 0, 0, 1],
    });
    let path = dir.join("cyclic.json");
    std::fs::write(&path, system.to_string()).unwrap();
    let run = gstable(&["schreier", s(&path)]);
    assert_eq!(run.status.code(), Some(0));
    let out: serde_json::Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(out["extension_order"], 4);
    assert_eq!(out["split"], false);

    let mut broken = system.clone();
    broken["gamma"] = serde_json::json!([0, 1, 0, 1]);
    std::fs::write(&path, broken.to_string()).unwrap();
    let run = gstable(&["schreier", s(&path)]);
    assert_eq!(run.status.code(), Some(1));
    let out: serde_json::Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(out["valid"], false);

    // U = 1 + J for J spanned by a nilpotent 2x2 matrix over GF(3), trivial action.
    let onej = serde_json::json!({
        "schema": "gstable.schreier/1",
        "base": c2,
        "coeff": {"kind": "one_plus_j", "p": 3, "dim": 2, "basis": [[[0, 1], [0, 0]]]},
        "kappa": [0, 1, 2, 0, 1, 2],
        "gamma": [0, 0, 0, 0],
    });
    std::fs::write(&path, onej.to_string()).unwrap();
    let run = gstable(&["schreier", s(&path)]);
    assert_eq!(run.status.code(), Some(0));
    let out: serde_json::Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(out["extension_order"], 6);
    assert_eq!(out["split"], true);
}
