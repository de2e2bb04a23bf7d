use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_picard"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(name).to_string_lossy().into_owned()
}

fn gen(args: &[&str]) -> String {
    let out = run(&[&["gen"], args].concat());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn analyze_and_classify_from_stdin() {
    let inst = gen(&["cm-power", "--g", "3"]);
    let out = run_stdin(&["analyze", "-"], &inst);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!((v["rho"].as_u64(), v["degree_d"].as_u64()), (Some(9), Some(2)));

    let out = run_stdin(&["classify", "-"], &inst);
    let v = json(&out);
    assert_eq!(v["report"]["end_rank"].as_u64(), Some(18));
    assert_eq!(v["report"]["polarization"]["status"], "found");
    assert_eq!(v["provenance"]["precision_bits"].as_u64(), Some(256));
}

#[test]
fn reports_are_deterministic() {
    let inst = gen(&["random", "--field", "cubic", "--g", "2", "--seed", "11"]);
    assert_eq!(inst, gen(&["random", "--field", "cubic", "--g", "2", "--seed", "11"]));
    let a = run_stdin(&["classify", "-"], &inst).stdout;
    let b = run_stdin(&["classify", "-"], &inst).stdout;
    assert_eq!(a, b);
}

#[test]
fn bounds_ns_basis_end_rank() {
    let inst = gen(&["cm-pair"]);
    let v = json(&run_stdin(&["bounds", "-"], &inst));
    assert_eq!(v["bound_dij"].as_i64(), Some(2));
    assert_eq!(v["bound_degree"], "2");
    let v = json(&run_stdin(&["ns-basis", "-"], &inst));
    assert_eq!(v["classes"].as_array().map(Vec::len), Some(2));
    let v = json(&run_stdin(&["end-rank", "-"], &inst));
    assert_eq!(v["end_rank"].as_u64(), Some(4));
    let text = run_stdin(&["end-rank", "-", "--format", "text"], &inst);
    assert!(String::from_utf8_lossy(&text.stdout).starts_with("end_rank = 4"));
}

#[test]
fn transformed_generator_keeps_rho() {
    let dir = std::env::temp_dir().join(format!("picard-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let base = dir.join("base.json");
    std::fs::write(&base, gen(&["cm-power", "--g", "2"])).unwrap();
    let t = gen(&["transformed", "--base", base.to_str().unwrap(), "--seed", "7"]);
    let v = json(&run_stdin(&["analyze", "-"], &t));
    assert_eq!(v["rho"].as_u64(), Some(4));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_codes() {
    // input errors
    assert_eq!(run_stdin(&["analyze", "-"], "{ not json").status.code(), Some(2));
    assert_eq!(run(&["analyze", "/nonexistent/file.json"]).status.code(), Some(2));
    let g1 = gen(&["noncm-cubic-power", "--g", "1"]);
    assert_eq!(run_stdin(&["bounds", "-"], &g1).status.code(), Some(2));
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
    // indeterminate certification
    let real = r#"{"field": {"minpoly": [1, 0, 1], "root": {"re": "0", "im": "1"}}, "g": 1, "tau": [[["1", "0"]]]}"#;
    assert_eq!(run_stdin(&["analyze", "-"], real).status.code(), Some(3));
}

#[test]
fn parse_error_reports_position() {
    let out = run_stdin(&["analyze", "-"], "{\n \"g\": 1,\n \"field\": 7\n}");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn degree_sixteen_file() {
    let out = run(&["analyze", &data("data/rho_zero_deg16.json")]);
    let v = json(&out);
    assert_eq!((v["rho"].as_u64(), v["degree_d"].as_u64()), (Some(0), Some(16)));
}

#[test]
fn verify_suite_emits_json_lines() {
    let out = run(&["verify", "decomposition"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(!lines.is_empty());
    for l in &lines {
        for key in ["suite", "check", "instance", "expected", "got", "pass"] {
            assert!(l.get(key).is_some(), "missing {key}");
        }
        assert_eq!(l["pass"], true);
    }
}
