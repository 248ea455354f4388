//! End-to-end binary behavior: exit codes, report determinism, and the
//! documented error paths.

use std::path::Path;
use std::process::{Command, Output};

fn starcon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_starcon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_file(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn check_passes_on_exported_u2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u2.json");
    let out = starcon(&["catalog", "export", "--name", "u2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let out = starcon(&["check", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["results"][0]["name"], "associativity");
    assert_eq!(report["results"][0]["pass"], true);
}

#[test]
fn check_fails_on_nonassociative_table() {
    // The u(2) product table printed without the imaginary unit.
    let dir = tempfile::tempdir().unwrap();
    let json = r#"{
        "dim": 4,
        "basis": ["e0", "e1", "e2", "e3"],
        "params": [],
        "constants": [
            {"m":0,"n":0,"l":0,"coeff":"1"},
            {"m":0,"n":1,"l":1,"coeff":"1"}, {"m":1,"n":0,"l":1,"coeff":"1"},
            {"m":0,"n":2,"l":2,"coeff":"1"}, {"m":2,"n":0,"l":2,"coeff":"1"},
            {"m":0,"n":3,"l":3,"coeff":"1"}, {"m":3,"n":0,"l":3,"coeff":"1"},
            {"m":1,"n":1,"l":0,"coeff":"1"}, {"m":2,"n":2,"l":0,"coeff":"1"},
            {"m":3,"n":3,"l":0,"coeff":"1"},
            {"m":1,"n":2,"l":3,"coeff":"1"}, {"m":2,"n":1,"l":3,"coeff":"-1"},
            {"m":2,"n":3,"l":1,"coeff":"1"}, {"m":3,"n":2,"l":1,"coeff":"-1"},
            {"m":3,"n":1,"l":2,"coeff":"1"}, {"m":1,"n":3,"l":2,"coeff":"-1"}
        ]
    }"#;
    let path = write_file(dir.path(), "u2_noi.json", json);
    let out = starcon(&["check", "--file", &path]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["results"][0]["pass"], false);
    assert!(report["results"][0]["details"]["violation_count"].as_u64().unwrap() > 0);
}

#[test]
fn contract_reports_divergent_entries() {
    let dir = tempfile::tempdir().unwrap();
    let json = r#"{
        "dim": 2,
        "basis": ["e1", "e2"],
        "params": ["lambda"],
        "constants": [ {"m":0,"n":0,"l":1,"coeff":"1"} ],
        "transform": {
            "param": "lambda",
            "critical": "0",
            "matrix": [["1","0"],["0","lambda"]]
        }
    }"#;
    let path = write_file(dir.path(), "bad.json", json);
    let out = starcon(&["contract", "--file", &path]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["results"][0]["name"], "limit_exists");
    assert_eq!(report["results"][0]["pass"], false);
    assert_eq!(
        report["results"][0]["details"]["divergent_entries"],
        serde_json::json!([[0, 0, 1]])
    );
}

#[test]
fn contract_u2_yields_commutative_algebra() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u2.json");
    starcon(&["catalog", "export", "--name", "u2", "--out", path.to_str().unwrap()]);
    let out = starcon(&["contract", "--file", path.to_str().unwrap(), "--critical", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["results"][1]["name"], "contracted_associativity");
    assert_eq!(report["results"][1]["pass"], true);
    // All surviving constants are unit-row/column entries.
    let constants = report["results"][0]["details"]["algebra"]["constants"]
        .as_array()
        .unwrap();
    assert_eq!(constants.len(), 7);
    for c in constants {
        assert!(c["m"] == 0 || c["n"] == 0);
        assert_eq!(c["coeff"], "1");
    }
}

#[test]
fn classify_zero_bracket_as_type_i() {
    let dir = tempfile::tempdir().unwrap();
    let json = r#"{ "dim": 3, "basis": ["e1","e2","e3"], "params": [], "constants": [] }"#;
    let path = write_file(dir.path(), "zero.json", json);
    let out = starcon(&["classify", "--file", &path]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["results"][0]["details"]["type"], "I");
}

#[test]
fn usage_errors_exit_2() {
    // Unknown subcommand (clap) and missing file (our validation).
    let out = starcon(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    let out = starcon(&["check", "--file", "/nonexistent/nope.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    // Malformed JSON carries a line/column in the message.
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "broken.json", "{ \"dim\": ");
    let out = starcon(&["check", "--file", &path]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("line"), "expected line/column in `{msg}`");
}

#[test]
fn kdeform_with_unit_k_keeps_associativity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u2.json");
    starcon(&["catalog", "export", "--name", "u2", "--out", path.to_str().unwrap()]);
    let out = starcon(&[
        "kdeform",
        "--file",
        path.to_str().unwrap(),
        "--kvector",
        "1,0,0,0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["results"][0]["name"], "deformed_associativity");
    assert_eq!(report["results"][0]["pass"], true);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u2.json");
    starcon(&["catalog", "export", "--name", "u2", "--out", path.to_str().unwrap()]);
    let a = starcon(&["check", "--file", path.to_str().unwrap()]);
    let b = starcon(&["check", "--file", path.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    let a = starcon(&["kernel-limit", "--hbar", "0.1", "--hbar", "0.01"]);
    let b = starcon(&["kernel-limit", "--hbar", "0.1", "--hbar", "0.01"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn catalog_list_enumerates_fixtures() {
    let out = starcon(&["catalog", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let fixtures = &report["results"][0]["details"];
    for name in ["so3_adjoint", "bianchi_L_K", "bianchi_X_K", "u2", "pauli_kstar", "eta"] {
        assert!(fixtures.get(name).is_some(), "missing fixture {name}");
    }
    assert_eq!(fixtures["eta"], serde_json::json!(["mu1", "mu2", "mu3"]));
}

#[test]
fn moyal_substitutes_hbar() {
    let out = starcon(&["moyal", "--f", "q1", "--g", "p1", "--param", "h1=0"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["results"][0]["details"]["f_star_g"], "q1*p1");
    // And with the parameter left formal the correction term shows up.
    let out = starcon(&["moyal", "--f", "q1", "--g", "p1"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["results"][0]["details"]["f_star_g"], "q1*p1 + 1/2*i*h1");
}
