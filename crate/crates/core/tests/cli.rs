use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sympinv"))
}

fn write_input(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sympinv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

const TRANSVECTION: &str = r#"{"field":{"kind":"prime","p":3},"rows":[[1,1],[0,1]]}"#;

#[test]
fn classify_reports_and_rechecks() {
    let p = write_input("t.json", TRANSVECTION);
    let o = run(&["classify", p.to_str().unwrap(), "--recheck", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["report"]["bireflectional"]["status"], "false");
}

#[test]
fn classify_is_deterministic() {
    let p = write_input("skew.json", r#"{"field":{"kind":"prime","p":7},"rows":[[0,1],[6,0]]}"#);
    let a = run(&["classify", p.to_str().unwrap()]);
    let b = run(&["classify", p.to_str().unwrap(), "--jobs", "1"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn saved_report_rechecks() {
    let p = write_input("skew3.json", r#"{"field":{"kind":"prime","p":3},"rows":[[0,1],[2,0]]}"#);
    let report = p.with_file_name("skew3.report.json");
    let o = run(&["classify", p.to_str().unwrap(), "--output", report.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(!v["report"]["two_skew"]["witness"].is_null());
    assert_eq!(code(&run(&["recheck", report.to_str().unwrap()])), 0);

    // corrupt one factor: the recheck must refuse it
    let mut bad = v.clone();
    bad["report"]["two_skew"]["witness"]["factors"][0] = serde_json::json!([[1, 0], [0, 1]]);
    let tampered = p.with_file_name("skew3.bad.json");
    std::fs::write(&tampered, serde_json::to_string(&bad).unwrap()).unwrap();
    assert_eq!(code(&run(&["recheck", tampered.to_str().unwrap()])), 1);
}

#[test]
fn element_with_explicit_form() {
    let p = write_input(
        "elem.json",
        r#"{"space":{"dim":2,"gram":{"field":{"kind":"prime","p":5},"rows":[[0,2],[3,0]]}},
            "matrix":{"field":{"kind":"prime","p":5},"rows":[[1,1],[0,1]]}}"#,
    );
    let o = run(&["classify", p.to_str().unwrap(), "--form", "file", "--recheck"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn wall_of_transvection() {
    let p = write_input("w.json", TRANSVECTION);
    let o = run(&["wall", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["unipotent_cyclic"], true);
    assert!(v["theta_class"].is_string());
    assert!(v["antitriangular"].is_array());
}

#[test]
fn enumerate_sp2_3_csv() {
    let o = run(&["enumerate", "--n", "1", "--q", "3"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("class_id,rep,size,order_of_element"));
    assert_eq!(lines.count(), 7);
}

#[test]
fn enumerate_json_census() {
    let o = run(&["enumerate", "--n", "1", "--q", "3", "--out", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["order"], 24);
    assert_eq!(v["classes"].as_array().unwrap().len(), 7);
}

#[test]
fn verify_skips_outside_scope() {
    let o = run(&["verify", "--suite", "theorem4", "--n", "1", "--q", "5"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipped"));
}

#[test]
fn verify_small_suite_passes() {
    let o = run(&["verify", "--suite", "theorem2", "--n", "1", "--q", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(json(&o)["passed"], true);
}

#[test]
fn exit_code_parse_error() {
    let p = write_input("broken.json", "{rows");
    assert_eq!(code(&run(&["classify", p.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["verify", "--suite", "nonsense"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn exit_code_not_symplectic() {
    let p = write_input("ns.json", r#"{"field":{"kind":"prime","p":3},"rows":[[2,0],[0,1]]}"#);
    assert_eq!(code(&run(&["classify", p.to_str().unwrap()])), 3);
}

#[test]
fn exit_code_unsupported_field() {
    let p = write_input("f4.json", r#"{"field":{"kind":"prime","p":4},"rows":[[1,0],[0,1]]}"#);
    assert_eq!(code(&run(&["classify", p.to_str().unwrap()])), 4);
    let p = write_input("f9.json", r#"{"field":{"kind":"extension","p":3,"k":2},"rows":[[1]]}"#);
    assert_eq!(code(&run(&["classify", p.to_str().unwrap()])), 4);
}

#[test]
fn exit_code_budget() {
    assert_eq!(code(&run(&["enumerate", "--n", "3", "--q", "3"])), 5);
}
