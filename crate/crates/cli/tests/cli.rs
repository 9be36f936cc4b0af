use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn lpsas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpsas"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn example(dir: &TempDir) -> PathBuf {
    let path = dir.path().join("example.json");
    let out = lpsas(&["paper-example", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    path
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn paper_example_round_trip_verifies() {
    let dir = TempDir::new().unwrap();
    let path = example(&dir);
    let printed = lpsas(&["paper-example"]);
    assert_eq!(stdout(&printed), fs::read_to_string(&path).unwrap());
    let out = lpsas(&["verify", s(&path)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc = json(&out);
    assert_eq!(doc["command"], "verify");
    let checks = doc["report"]["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] == "pass" || c["status"] == "conditional" || c["kind"] == "reference"));
}

#[test]
fn antisymmetry_violation_exits_one_with_witness() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "bad.json",
        r#"{"dim": 2, "metric": [["1", "0"], ["0", "1"]],
            "brackets": [{"i": 1, "j": 2, "k": 1, "value": "1"}, {"i": 2, "j": 1, "k": 1, "value": "1"}],
            "phi": [["0", "0"], ["0", "0"]], "xi": ["1", "0"]}"#,
    );
    let out = lpsas(&["verify", s(&path)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("(1,2,1)"), "{}", stderr(&out));
}

#[test]
fn singular_metric_exits_one() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "singular.json",
        r#"{"dim": 2, "metric": [["1", "1"], ["1", "1"]], "brackets": [],
            "phi": [["0", "0"], ["0", "0"]], "xi": ["1", "0"]}"#,
    );
    let out = lpsas(&["verify", s(&path)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("rank"), "{}", stderr(&out));
}

#[test]
fn io_parse_and_usage_errors() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(lpsas(&["verify", s(&missing)]).status.code(), Some(3));

    let path = write(&dir, "broken.json", "{\n  \"dim\": 4,\n  \"metric\": [[\"1\", oops]]\n}");
    let out = lpsas(&["verify", s(&path)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    assert_eq!(lpsas(&["frobnicate"]).status.code(), Some(2));
    let example = example(&dir);
    assert_eq!(lpsas(&["ricci", s(&example), "--a", "1"]).status.code(), Some(2));
    let out = lpsas(&["soliton", s(&example), "--x", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--x"), "{}", stderr(&out));
}

#[test]
fn non_lp_input_is_a_precondition_failure() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "flat.json",
        r#"{"dim": 2, "metric": [["1", "0"], ["0", "-1"]], "brackets": [],
            "phi": [["0", "0"], ["0", "0"]], "xi": ["0", "1"]}"#,
    );
    let out = lpsas(&["ricci", s(&path), "--preset", "zamkovoy"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn soliton_space_along_xi_is_three_dimensional() {
    let dir = TempDir::new().unwrap();
    let path = example(&dir);
    let out = lpsas(&["soliton", s(&path), "--x", "xi", "--a", "2", "--b", "-1/2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc = json(&out);
    assert_eq!(doc["data"]["dimension"], 3);
}

#[test]
fn table_output_without_color() {
    let dir = TempDir::new().unwrap();
    let path = example(&dir);
    let out = lpsas(&["--format", "table", "scalar", s(&path), "--preset", "tanaka-webster"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(!text.contains('\x1b'));
    assert!(text.contains("PASS"));
}

#[test]
fn schouten_van_kampen_coefficients() {
    let dir = TempDir::new().unwrap();
    let path = example(&dir);
    let out = lpsas(&["connection", s(&path), "--preset", "schouten-van-kampen"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let coefficients = doc["data"]["coefficients"].as_array().unwrap();
    let find = |ix: [u64; 3]| {
        coefficients
            .iter()
            .find(|c| c["index"] == serde_json::json!(ix))
            .map(|c| c["value"].as_str().unwrap().to_string())
    };
    // e1 component of nabla_{e1} e4
    assert_eq!(find([1, 1, 4]).as_deref(), Some("-2"));
    assert_eq!(find([1, 4, 1]), None);
}

#[test]
fn theorems_report_is_consistent() {
    let dir = TempDir::new().unwrap();
    let path = example(&dir);
    let out = lpsas(&["theorems", s(&path), "--a", "1/2", "--b", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}
