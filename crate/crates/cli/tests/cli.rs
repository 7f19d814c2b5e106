use minvf_cli::config::{Args, Command, RunConfig, Source};
use minvf_cli::output::reserialize;
use clap::Parser;
use serde_json::Value;
use std::path::Path;
use std::process::{Command as Process, Output};

fn verify(args: &[&str]) -> Output {
    Process::new(env!("CARGO_BIN_EXE_verify"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn euclidean_killing_and_minimality_are_clean() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("flat.json");
    let o = verify(&[
        "euclidean_parallel",
        "--cmd",
        "check-killing",
        "--cmd",
        "minimality",
        "--grid",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let killing = read_json(&dir.path().join("flat.check-killing.json"));
    assert_eq!(killing["passed"], Value::Bool(true));
    let report = read_json(&dir.path().join("flat.minimality.json"));
    assert_eq!(report["summary"]["verdict"], "minimal");
    let points = report["points"].as_array().unwrap();
    assert_eq!(points.len(), 125);
    for p in points {
        for key in ["omega_direct", "omega_frame", "criterion"] {
            assert!(p[key].as_array().unwrap().iter().all(|v| num(v) == 0.0));
        }
    }
}

#[test]
fn twisted_falsification_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("twisted.json");
    let o = verify(&[
        "twisted_r3",
        "--cmd",
        "compare-theorems",
        "--random",
        "50",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = read_json(&out);
    let s = &report["summary"];
    assert!(num(&s["max_residual_corrected"]) < 1e-5);
    assert!(num(&s["max_residual_original"]) > 1e-3);
    assert_eq!(s["verdict"], "not minimal");
    let points = report["points"].as_array().unwrap();
    assert_eq!(points.len(), 50);
    for p in points {
        for key in ["residual_original", "residual_corrected", "f"] {
            assert!(p[key].is_number());
        }
        assert_eq!(p["lambdas"].as_array().unwrap().len(), 1);
        assert!(p["verdict"].is_string());
    }
}

#[test]
fn asymmetric_metric_file_names_the_entry() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{
  "dimension": 2,
  "coords": ["x", "y"],
  "metric": {"x,x": "1", "y,y": "1", "x,y": "0.1*x", "y,x": "0.2*x"},
  "V": ["1", "0"],
  "domain": {"x": [0, 1], "y": [0, 1]}
}"#,
    )
    .unwrap();
    let o = verify(&[path.to_str().unwrap(), "--cmd", "check-killing"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("\"y,x\""), "{err}");
}

#[test]
fn definition_file_matches_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("heis.json");
    std::fs::write(
        &path,
        r#"{
  "dimension": 3,
  "coords": ["x", "y", "z"],
  "metric": {
    "x,x": "1 + y^2/4", "y,y": "1 + x^2/4", "z,z": "1",
    "x,y": "-x*y/4", "y,x": "-x*y/4", "x,z": "-y/2", "y,z": "x/2"
  },
  "V": ["0", "0", "1"],
  "domain": {"x": [-1, 1], "y": [-1, 1], "z": [-1, 1]},
  "grid": {"x": 3, "y": 3, "z": 2}
}"#,
    )
    .unwrap();
    let out = dir.path().join("r.json");
    let o = verify(&[path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = read_json(&out);
    assert_eq!(report["manifold"], "heis");
    assert_eq!(report["samples"]["total"], 18);
    assert_eq!(report["summary"]["verdict"], "minimal");
    for p in report["points"].as_array().unwrap() {
        assert!((num(&p["f"]) - 1.25).abs() < 1e-9);
    }
}

#[test]
fn json_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.json");
    let o = verify(&[
        "hopf_s3",
        "--cmd",
        "compare-theorems",
        "--random",
        "4",
        "--point",
        "0.7,-0.2,0.4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(reserialize(&text).unwrap(), text);
}

#[test]
fn seeded_runs_are_deterministic() {
    let run = |seed: &str| {
        let o = verify(&["twisted_r3", "--random", "5", "--seed", seed, "--cmd", "minimality"]);
        assert_eq!(o.status.code(), Some(0));
        o.stdout
    };
    assert_eq!(run("7"), run("7"));
    assert_ne!(run("7"), run("8"));
}

#[test]
fn csv_has_fixed_columns() {
    let o = verify(&["heisenberg", "--random", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "x,y,z,direction,omega_direct,omega_frame,f,rho_original,rho_corrected,grad_term,\
         residual_original,residual_corrected,grad_term_formula"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2 * 3);
    assert!(rows.iter().all(|r| r.split(',').count() == 13));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(verify(&["no_such_manifold"]).status.code(), Some(2));
    assert_eq!(verify(&["hopf_s3", "--tol", "bogus=1"]).status.code(), Some(2));
    assert_eq!(verify(&["hopf_s3", "--tol", "identity"]).status.code(), Some(2));
    assert_eq!(verify(&["hopf_s3", "--point", "0.5,0"]).status.code(), Some(2));
    assert_eq!(verify(&["hopf_s3", "--point", "5,0,0"]).status.code(), Some(2));
    assert_eq!(verify(&["twisted_r3:b=1"]).status.code(), Some(2));
    assert_eq!(verify(&["hopf_s3", "--cmd", "nonsense"]).status.code(), Some(2));
    assert_eq!(verify(&["--help"]).status.code(), Some(0));
}

#[test]
fn failing_check_exits_1() {
    // a tolerance tighter than the Hopf stencil error
    let o = verify(&["hopf_s3", "--random", "3", "--tol", "identity=1e-14"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL"));
}

#[test]
fn catalog_parameters_reach_the_definition() {
    let o = verify(&["twisted_r3:a=0", "--random", "3", "--cmd", "minimality"]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["source"], "twisted_r3:a=0");
    assert_eq!(report["summary"]["verdict"], "minimal");
}

#[test]
fn out_path_inserts_command_name() {
    let args = |v: &[&str]| RunConfig::from_args(Args::try_parse_from(v).unwrap()).unwrap();
    let one = args(&["verify", "hopf_s3", "--out", "r/rep.json"]);
    assert_eq!(one.commands, vec![Command::CompareTheorems]);
    assert_eq!(one.out_path(Command::CompareTheorems).unwrap(), Path::new("r/rep.json"));
    let two = args(&["verify", "hopf_s3", "--cmd", "frame", "--cmd", "lemma12", "--cmd", "frame", "--out", "rep.csv", "--format", "csv"]);
    assert_eq!(two.commands, vec![Command::Frame, Command::Lemma12]);
    assert_eq!(two.out_path(Command::Lemma12).unwrap(), Path::new("rep.lemma12.csv"));
    let bare = args(&["verify", "hopf_s3", "--cmd", "frame", "--cmd", "lemma12", "--out", "rep"]);
    assert_eq!(bare.out_path(Command::Frame).unwrap(), Path::new("rep.frame.json"));
    assert!(bare.samples.grid);
    let random = args(&["verify", "hopf_s3", "--random", "3"]);
    assert!(!random.samples.grid);
}

#[test]
fn source_parsing() {
    assert_eq!(
        Source::parse("twisted_r3:a=-2").unwrap(),
        Source::Catalog {
            name: "twisted_r3".into(),
            params: vec![("a".into(), -2.0)]
        }
    );
    assert!(Source::parse("/definitely/missing.json").is_err());
}

#[test]
fn frame_command_reports_columns() {
    let o = verify(&["product_s3_r2", "--cmd", "frame", "--point", "0.6,0.1,0.2,0.3,-0.4"]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    let p = &report["points"][0];
    assert_eq!(p["m"], 1);
    assert_eq!(p["labels"], serde_json::json!(["E1", "E1*", "E3", "E4", "V"]));
    assert_eq!(p["columns"].as_array().unwrap().len(), 5);
    assert!(num(&p["gram_defect"]) < 1e-9);
}
