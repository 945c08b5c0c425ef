use std::f64::consts::PI;
use std::process::{Command, Output};

use nalgebra::Matrix3;
use serde_json::Value;

use srlie_core::distance::dist;
use srlie_core::{BasisKind, GroupPoint, So3RPoint};

fn srlie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srlie")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn json(args: &[&str]) -> Value {
    let o = srlie(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).expect("valid JSON")
}

fn f(v: &Value) -> f64 {
    match v {
        Value::String(s) if s == "inf" => f64::INFINITY,
        Value::Number(n) => n.to_string().parse().expect("numeric"),
        other => panic!("not a number: {other}"),
    }
}

#[test]
fn dist_examples() {
    let v = json(&["dist", "--group", "su2r", "--metric", "2", "--A", "0,0", "--B", "1,0", "--v", "0"]);
    assert_eq!(f(&v["value"]), PI);
    assert_eq!(v["case_label"], 1);
    assert!(v["xi"].is_null());
    let v = json(&["dist", "--group", "su2r", "--metric", "2", "--A", "1,0", "--B", "0,0", "--v", "0"]);
    assert_eq!(f(&v["value"]), 0.0);
}

#[test]
fn dist_matches_library_bit_for_bit() {
    let v = json(&["dist", "--group", "so3r", "--metric", "1", "--C", "-1,0,0,0,-1,0,0,0,1", "--v", "0.5"]);
    let c = Matrix3::from_diagonal(&nalgebra::Vector3::new(-1.0, -1.0, 1.0));
    let lib = dist(&GroupPoint::So3R(So3RPoint::new(c, 0.5).unwrap()), BasisKind::D1).unwrap();
    assert_eq!(f(&v["value"]).to_bits(), lib.value.to_bits());
    assert_eq!(f(&v["residual"]).to_bits(), lib.residual.to_bits());
    assert_eq!(f(&v["xi"]).to_bits(), lib.xi.unwrap().to_bits());
    assert_eq!(v["case_label"], lib.case_label);
}

#[test]
fn geodesic_tables() {
    let o = srlie(&["geodesic", "--alpha", "1,0,0", "--beta", "0", "--t0", "0", "--t1", "0", "--n", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "t,ReA,ImA,ReB,ImB,v");
    assert_eq!(lines.len(), 2);
    let row: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(row, vec![0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    assert!(!s.contains('\r'));

    let v = json(&["geodesic", "--alpha", "1,0,0", "--beta", "0", "--t1", "3.141592653589793", "--n", "4"]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let last = &rows[4];
    assert!(f(&last["ReA"]).abs() < 1e-15 && (f(&last["ReB"]) - 1.0).abs() < 1e-15 && f(&last["v"]) == 0.0);

    let o = srlie(&[
        "geodesic", "--group", "so3r", "--metric", "1", "--phi0", "0.3", "--alpha2", "0.4", "--beta", "-1.2", "--t0",
        "-1", "--t1", "4", "--n", "25", "--format", "csv",
    ]);
    let s = stdout(&o);
    let mut lines = s.lines();
    let header = lines.next().unwrap();
    assert_eq!(header, "t,c11,c12,c13,c21,c22,c23,c31,c32,c33,v");
    let mut n = 0;
    for l in lines {
        let row: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(row.len(), 11);
        assert!((row[10] - 0.4 * row[0]).abs() <= 1e-12);
        n += 1;
    }
    assert_eq!(n, 26);
    assert_eq!(s.matches("t,c11").count(), 1);
}

#[test]
fn cut_and_conjugate() {
    let v = json(&["cut", "--group", "su2r", "--metric", "2", "--alpha", "1,0,0", "--beta", "0"]);
    assert_eq!(f(&v["cut_time"]), 2.0 * PI);
    let v = json(&["cut", "--group", "so3r", "--metric", "2", "--alpha", "1,0,0", "--beta", "0"]);
    assert!((f(&v["cut_time"]) - PI).abs() < 1e-12);
    let v = json(&["cut", "--alpha", "0,1,0", "--beta", "0"]);
    assert_eq!(v["cut_time"], "inf");
    assert_eq!(v["locus_class"], "MetricLine");
    let v = json(&["conjugate", "--alpha", "1,0,0", "--beta", "0", "--n", "2"]);
    assert!((f(&v["conjugate_time"]) - 8.986818915818).abs() < 1e-11);
    let o = srlie(&["conjugate", "--alpha", "0,1,0", "--beta", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn locus_membership() {
    let v = json(&["locus", "--group", "su2r", "--metric", "2", "--A", "-1,0", "--B", "0,0", "--v", "3"]);
    assert_eq!(v["in_cut_locus"], true);
    let o = srlie(&["locus", "--A", "1,0", "--B", "0,0", "--v", "3", "--format", "csv"]);
    assert_eq!(stdout(&o), "in_first_conjugate_locus,in_cut_locus,cut_locus_class\nno,no,\n");
}

#[test]
fn verify_examples_and_determinism() {
    let args = ["verify", "--suite", "splitting", "--count", "100", "--seed", "7"];
    let o = srlie(&args);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(f(&v["suites"][0]["max_residual"]) <= 1e-9);
    assert_eq!(stdout(&srlie(&args)), stdout(&o));
    let v = json(&["verify", "--suite", "ode", "--count", "10", "--seed", "1"]);
    assert!(f(&v["suites"][0]["max_residual"]) <= 1e-8);
    let v = json(&["verify", "--count", "3", "--seed", "2"]);
    assert_eq!(v["suites"].as_array().unwrap().len(), 5);
    let v = json(&["verify", "--count", "1", "--seed", "2", "--deep"]);
    assert_eq!(v["suites"][5]["name"], "shooting");
}

#[test]
fn input_errors_exit_2() {
    for args in [
        vec!["dist", "--A", "1,0", "--B", "1,0"],
        vec!["dist", "--group", "so3r", "--C", "1,0,0,0,1,0,0,0,-1"],
        vec!["dist", "--group", "so3r", "--A", "1,0", "--B", "0,0"],
        vec!["dist", "--A", "1,0"],
        vec!["dist", "--A", "1,x", "--B", "0,0"],
        vec!["--group", "hyper", "dist"],
        vec!["--metric", "3", "dist"],
        vec!["--format", "xml", "dist"],
        vec!["--tol", "-1", "dist"],
        vec!["cut", "--alpha", "1,1,0", "--beta", "0"],
        vec!["cut", "--beta", "0"],
        vec!["verify", "--suite", "nope"],
    ] {
        let o = srlie(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn alpha_is_normalized_within_tolerance() {
    let v = json(&["cut", "--alpha", "1.0000001,0,0", "--beta", "0"]);
    assert_eq!(f(&v["cut_time"]), 2.0 * PI);
}
