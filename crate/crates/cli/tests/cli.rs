use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use webcurv::algebra::parse::parse_ratfunc;

const BOL: &str = r#"{"d": 5, "slopes": ["-1", "1", "y/(x-1)", "y/(x+1)", "2*x*y/(x^2+y^2-1)"], "origin": ["0", "1/3"]}"#;

fn webcurv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_webcurv")).args(args).output().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn document(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn matrix(v: &Value) -> Vec<Vec<String>> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|row| row.as_array().unwrap().iter().map(|c| c.as_str().unwrap().to_string()).collect())
        .collect()
}

#[test]
fn bol_web_is_flat() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "bol.json", BOL);
    let out = webcurv(&["compute", &input, "--check-concentration"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = document(&out);
    assert_eq!(doc["d"], 5);
    assert_eq!(doc["m"], 6);
    let kk = matrix(&doc["curvature"]);
    assert_eq!(kk.len(), 6);
    assert!(kk.iter().flatten().all(|c| c == "0"));
    assert_eq!(doc["concentration"]["ok"], true);
}

#[test]
fn closed_form_for_three_lines() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "lines.json", r#"{"d": 3, "slopes": ["0", "1", "-1"]}"#);
    let out = webcurv(&["compute", &input, "--d3-blaschke"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = document(&out);
    assert_eq!(doc["blaschke"], "0");
    assert_eq!(matrix(&doc["curvature"]), vec![vec!["0".to_string()]]);
}

#[test]
fn malformed_coefficient_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "bad.json", r#"{"d": 3, "coefficients": ["x*", "0", "1"]}"#);
    let out = webcurv(&["compute", &input]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));
}

#[test]
fn missing_file_is_an_input_error() {
    let out = webcurv(&["compute", "/nonexistent/web.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pole_at_evaluation_point() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "cusp.json", r#"{"d": 3, "coefficients": ["0", "x", "y"]}"#);
    let out = webcurv(&["compute", &input, "--at", "x=-3,y=2"]);
    assert_eq!(out.status.code(), Some(3));
    let out = webcurv(&["compute", &input, "--points-only", "--at", "x=-3,y=2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn backends_agree_through_the_cli() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "web.json", r#"{"d": 4, "coefficients": ["x", "y", "x*y", "1+x^2"]}"#);
    let points = ["--at", "x=1/2,y=1/3", "--at", "x=-2,y=5/7"];
    let sym = document(&webcurv(&[&["compute", input.as_str()][..], &points[..]].concat()));
    let jet = document(&webcurv(&[&["compute", input.as_str(), "--points-only"][..], &points[..]].concat()));
    assert_eq!(sym["evaluations"], jet["evaluations"]);
    assert!(jet["curvature"].is_null());
    assert_eq!(jet["evaluations"].as_array().unwrap().len(), 2);
}

#[test]
fn output_is_deterministic_and_parses_back() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "web.json", r#"{"d": 3, "coefficients": ["x", "y", "x*y+1"]}"#);
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing_ms");
        v
    };
    let first = strip(document(&webcurv(&["compute", &input])));
    let second = strip(document(&webcurv(&["compute", &input])));
    assert_eq!(first, second);
    for cell in matrix(&first["curvature"]).iter().chain(&matrix(&first["seed_matrix"])).flatten() {
        let f = parse_ratfunc(cell).unwrap();
        assert_eq!(&f.to_string(), cell);
    }
}

#[test]
fn writes_to_output_file() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "lines.json", r#"{"d": 4, "slopes": ["0", "1", "-1", "2"]}"#);
    let target = dir.path().join("result.json");
    let out = webcurv(&["compute", &input, "--output", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&fs::read_to_string(Path::new(&target)).unwrap()).unwrap();
    assert_eq!(doc["i0"], 2);
    assert!(matrix(&doc["curvature"]).iter().flatten().all(|c| c == "0"));
}

#[test]
fn selftest_passes_and_catches_a_fault() {
    let ok = webcurv(&["selftest"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    let faulty = webcurv(&["selftest", "--inject-fault", "negate-h"]);
    assert_eq!(faulty.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&faulty.stdout).contains("FAIL"));
}
