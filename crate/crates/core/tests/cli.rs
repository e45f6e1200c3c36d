use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use sasaki_extremal::admissible::{fiber_polynomial, AdmissibleData, BaseFactor, WeightParams};
use sasaki_extremal::exactalg::{format_rational, int, parse_rational, Polynomial, Rational};
use sasaki_extremal::solver::{extremal_operator, extremal_source};

const FS: &str = r#"{"factors": [], "weight": {"a": "0", "b": "1"}}"#;
const ASYMMETRIC: &str = r#"{"factors": [{"dim": 1, "scal": "1", "p": 1, "c": "2"}], "weight": {"a": "0", "b": "1"}}"#;
const NO_SOLUTION: &str = r#"{"factors": [{"dim": 2, "scal": "-5", "p": 2, "c": "21/10"}], "weight": {"a": "0", "b": "1"}}"#;
const BOUNDARY: &str = r#"{"factors": [], "weight": {"a": "1", "b": "1"}, "extended": true}"#;
const BAD_CLASS: &str = r#"{"factors": [{"dim": 1, "scal": "1", "p": 1, "c": "1"}], "weight": {"a": "0", "b": "1"}}"#;

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sasaki-extremal"))
        .args(args)
        .env_remove("SASAKI_MAX_PREC")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    assert!(!text.contains("panicked"), "{text}");
    serde_json::from_str(text.trim()).unwrap()
}

#[test]
fn exists_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("fs.json", FS, 0),
        ("none.json", NO_SOLUTION, 3),
        ("boundary.json", BOUNDARY, 4),
        ("bad.json", BAD_CLASS, 1),
    ];
    for (name, body, want) in cases {
        let out = run(&["exists", &write_config(dir.path(), name, body)]);
        assert_eq!(code(&out), want, "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let fs = run(&["exists", &write_config(dir.path(), "fs.json", FS)]);
    assert_eq!(stdout_json(&fs)["exists"], Value::Bool(true));
    let none = run(&["exists", &write_config(dir.path(), "none.json", NO_SOLUTION)]);
    assert_eq!(stdout_json(&none)["exists"], Value::Bool(false));
}

#[test]
fn validation_error_names_the_constraint() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["exists", &write_config(dir.path(), "bad.json", BAD_CLASS)]);
    assert_eq!(code(&out), 1);
    assert!(stderr_json(&out)["error"].to_string().contains("c_j > |p_j|"));
}

#[test]
fn malformed_input_exits_one_without_panic() {
    let dir = tempfile::tempdir().unwrap();
    for body in ["{", "[]", r#"{"weight": {"a": "x", "b": "1"}}"#, r#"{"weight": {"a": "1/0", "b": "1"}}"#, ""] {
        let out = run(&["solve", &write_config(dir.path(), "broken.json", body)]);
        assert_eq!(code(&out), 1, "{body:?}");
        assert!(stderr_json(&out).get("error").is_some());
    }
    assert_eq!(code(&run(&["solve", "/nonexistent/config.json"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&[])), 1);
}

#[test]
fn solver_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let negative_w = r#"{"factors": [], "weight": {"a": "0", "b": "1"}, "w": ["-1"]}"#;
    let out = run(&["perturb", &write_config(dir.path(), "w.json", negative_w), "--t", "1"]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stderr_json(&out)["kind"], "solver");

    // pairings are undefined on the boundary ray; that is an input error
    let out = run(&["futaki", &write_config(dir.path(), "boundary.json", BOUNDARY), "--ellz", "1,0"]);
    assert_eq!(code(&out), 1);
}

fn parse_all(v: &Value) -> Vec<Rational> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|s| parse_rational(s.as_str().unwrap()).unwrap())
        .collect()
}

#[test]
fn solve_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["solve", &write_config(dir.path(), "asym.json", ASYMMETRIC)]);
    assert_eq!(code(&out), 0);
    let json = stdout_json(&out);
    let f = Polynomial::new(parse_all(&json["F"]));
    let a = parse_rational(json["A"].as_str().unwrap()).unwrap();
    let b = parse_rational(json["B"].as_str().unwrap()).unwrap();

    let data = AdmissibleData::new(vec![BaseFactor::new(1, int(1), 1, int(2))]);
    let w = WeightParams::new(int(0), int(1));
    assert_eq!(extremal_operator(&f, &w, data.m()), extremal_source(&data, &w, &a, &b));
    let (pc, df) = (fiber_polynomial(&data), f.derivative());
    assert_eq!(f.eval(&int(1)), int(0));
    assert_eq!(f.eval(&int(-1)), int(0));
    assert_eq!(df.eval(&int(1)), int(-2) * pc.eval(&int(1)));
    assert_eq!(df.eval(&int(-1)), int(2) * pc.eval(&int(-1)));

    let again: Vec<String> = f.coeffs().iter().map(format_rational).collect();
    let original: Vec<&str> = json["F"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
    assert_eq!(again, original);
    assert_eq!(format_rational(&a), json["A"].as_str().unwrap());
    assert_eq!(format_rational(&b), json["B"].as_str().unwrap());

    let second = run(&["solve", &write_config(dir.path(), "asym.json", ASYMMETRIC)]);
    assert_eq!(second.stdout, out.stdout);
}

#[test]
fn scan_grid_three_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "fs.json", FS);
    let csv = dir.path().join("scan.csv");
    let svg = dir.path().join("scan.svg");
    let out = run(&[
        "scan",
        &cfg,
        "--b",
        "1",
        "--grid",
        "3",
        "--csv",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "a,b,exists,A,B,min_theta,csc");
    let a: Vec<&str> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(a, ["-1/2", "0", "1/2"]);
    assert!(lines[1..].iter().all(|l| l.split(',').nth(1) == Some("1")));
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), text);
    let svg = std::fs::read_to_string(&svg).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("min-theta"));
}

#[test]
fn futaki_and_csc_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "asym.json", ASYMMETRIC);
    let out = run(&["futaki", &cfg, "--ellz", "1,0"]);
    assert_eq!(code(&out), 0);
    let json = stdout_json(&out);
    assert_eq!(json["futaki"]["sign"], "+");
    assert!(json["cK"]["float"].as_f64().unwrap() > 0.0);

    let fs = write_config(dir.path(), "fs.json", FS);
    let zero = stdout_json(&run(&["futaki", &fs, "--ellz", "1,0"]));
    assert_eq!(zero["futaki"]["sign"], "0");

    let out = run(&["csc", &cfg, "--b", "1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout_json(&out)["csc_rays"].is_array());
}

#[test]
fn precision_flag_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "asym.json", ASYMMETRIC);
    let out = run(&["--precision", "256", "futaki", &cfg, "--ellz", "-1,1/2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}
