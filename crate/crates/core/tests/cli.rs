//! End-to-end tests of the command-line interface: report shape, determinism,
//! and exit codes.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn isodef(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isodef"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn cohomology_trivial_rank1_three_points() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "conn.json",
        r#"{"rank": 1, "points": ["0", "1", "inf"], "matrix": [["0"]]}"#,
    );
    let out = isodef(&["cohomology", file.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rep = report(&out);
    assert_eq!(rep["results"]["dims"]["h1"], 2);
    assert_eq!(rep["results"]["dims"]["h1p"], 0);
    assert_eq!(rep["consistency"]["ok"], true);
    assert_eq!(rep["tool"]["name"], "isodef");

    // determinism: identical input, byte-identical report
    let again = isodef(&["cohomology", file.to_str().unwrap()]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn cohomology_malformed_entry_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "bad.json",
        r#"{"rank": 1, "points": ["0", "inf"], "matrix": [["1//t"]]}"#,
    );
    let out = isodef(&["cohomology", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["code"], "syntax");
}

#[test]
fn cohomology_non_fuchsian_exits_3_with_point() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "irr.json",
        r#"{"rank": 1, "points": ["0", "inf"], "matrix": [["1/t^2"]]}"#,
    );
    let out = isodef(&["cohomology", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["code"], "not-fuchsian");
    assert!(err["error"]["message"].as_str().unwrap().contains('0'));
}

#[test]
fn rigidity_hypergeometric_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "hg.json",
        r#"{"matrices": [
            [["2","1"],["-1","0"]],
            [["1","0"],["-3","1"]],
            [["0","-1"],["1","-2"]]
        ]}"#,
    );
    let out = isodef(&["rigidity", file.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rep = report(&out);
    assert_eq!(rep["results"]["katz_index"], 0);
    assert_eq!(rep["results"]["absolutely_irreducible"], true);
    assert_eq!(
        rep["results"]["centralizer_codims"],
        serde_json::json!([2, 2, 2])
    );
}

#[test]
fn rigidity_identity_tuple_is_reducible() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "id.json",
        r#"{"matrices": [[["1","0"],["0","1"]]]}"#,
    );
    let out = isodef(&["rigidity", file.to_str().unwrap()]);
    assert!(out.status.success());
    let rep = report(&out);
    // 2(1 - n^2) + codim(centralizer of 1) = 2(1 - 4) + 0
    assert_eq!(rep["results"]["katz_index"], -6);
    assert_eq!(rep["results"]["absolutely_irreducible"], false);
    assert_eq!(rep["results"]["rigid"], Value::Null);
}

#[test]
fn rigidity_non_square_matrix_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "bad.json",
        r#"{"matrices": [[["1","0","0"],["0","1","0"]]]}"#,
    );
    let out = isodef(&["rigidity", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn deform_gm_trivial_rank1() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "gm.json",
        r#"{"rank": 1, "points": ["0", "inf"], "matrix": [["0"]],
            "ring": {"vars": ["e"], "order": 2}}"#,
    );
    let out = isodef(&["deform", file.to_str().unwrap(), "--order", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rep = report(&out);
    assert_eq!(rep["results"]["first_order_classes"], 1);
    assert_eq!(rep["results"]["target_order"], 2);
    // lift further to order 3 with the sharp obstruction switched on
    let out = isodef(&["deform", file.to_str().unwrap(), "--order", "3", "--sharp"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rep = report(&out);
    let steps = rep["results"]["lift_steps"].as_array().unwrap();
    assert_eq!(steps.len(), 1);
    assert_eq!(steps[0]["lifted"], true);
    assert_eq!(steps[0]["sharp"]["pairing_with_one"], "0");
    assert_eq!(steps[0]["sharp"]["vanishes"], true);
    assert_eq!(rep["results"]["final_locally_trivializable"], true);
}

#[test]
fn deform_order_seven_is_an_option_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "gm.json",
        r#"{"rank": 1, "points": ["0", "inf"], "matrix": [["0"]],
            "ring": {"vars": ["e"], "order": 2}}"#,
    );
    let out = isodef(&["deform", file.to_str().unwrap(), "--order", "7"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["code"], "option-error");
}

#[test]
fn dgla_descriptor_report() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "dgla.json",
        r#"{"dims": [1, 1], "differentials": [[["1"]]], "brackets": []}"#,
    );
    let out = isodef(&["dgla", file.to_str().unwrap(), "--ring", "e:3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rep = report(&out);
    assert_eq!(rep["results"]["laws_verified"], true);
    assert_eq!(rep["results"]["cohomology_dims"], serde_json::json!([0, 0]));
    assert_eq!(rep["results"]["ring"]["dim"], 3);
}

#[test]
fn dgla_bad_ring_spec_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "dgla.json",
        r#"{"dims": [1], "differentials": [], "brackets": []}"#,
    );
    let out = isodef(&["dgla", file.to_str().unwrap(), "--ring", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_exits_2() {
    let out = isodef(&["cohomology", "/nonexistent/problem.json"]);
    assert_eq!(out.status.code(), Some(2));
}
