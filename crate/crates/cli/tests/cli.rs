use std::process::{Command, Output};

use eisum_core::series::RationalSeries;
use serde_json::Value;

fn eisum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eisum")).args(args).output().unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let out = eisum(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    eisum(args).status.code().unwrap()
}

#[test]
fn coeffs_round_trip() {
    let v = ok_json(&["coeffs", "--order", "14"]);
    let s = RationalSeries::from_json(&v).unwrap();
    assert_eq!(s.dense().len(), 15);
    assert_eq!(s.coeff(1).to_string(), "4/25");
    assert_eq!(s.coeff(2).to_string(), "0");
    assert_eq!(s.coeff(3).to_string(), "-392/625");
    assert_eq!(s.to_json(), v);

    let v = ok_json(&["coeffs", "--order", "2"]);
    assert_eq!(v["coeffs"], serde_json::json!(["4/25", "0/1"]));
}

#[test]
fn coeffs_csv() {
    let out = eisum(&["coeffs", "--order", "4", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "k,a_k");
    assert_eq!(lines[1], "0,0/1");
    assert_eq!(lines[2], "1,4/25");
    assert_eq!(lines[4], "3,-392/625");
    assert_eq!(lines.len(), 6);
}

#[test]
fn summate_one_has_no_poles() {
    let v = ok_json(&["summate", "--n", "1"]);
    assert!(v["pole_residue_set"]["entries"].as_array().unwrap().is_empty());
    let poly = v["pole_residue_set"]["polynomial_part"].as_array().unwrap();
    assert_eq!(poly.len(), 2);
    let c1: f64 = poly[1][0].as_str().unwrap().parse().unwrap();
    assert!((c1 - 0.16).abs() < 1e-15);
    assert!((v["theta1"].as_f64().unwrap() + std::f64::consts::PI).abs() < 1e-15);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["summate", "--n", "0"]), 2);
    assert_eq!(code(&["summate", "--bogus"]), 2);
    assert_eq!(code(&["residual-grid", "--grid", "1,0,0.1,0,3"]), 2);
    assert_eq!(code(&["greens", "--w", "0+2i"]), 3);
    assert_eq!(code(&["ei-eval", "--x", "0"]), 3);
    assert_eq!(code(&["coeffs", "--out", "/nonexistent/dir/file"]), 6);
    assert_eq!(code(&["summate", "--config", "/nonexistent/eisum.cfg"]), 6);
}

#[test]
fn config_file_with_flag_override() {
    let dir = std::env::temp_dir().join(format!("eisum-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "# run settings\nn = 10\ntheta = 0.5\n").unwrap();
    let p = cfg.display().to_string();

    let from_file = ok_json(&["summate", "--config", &p]);
    assert_eq!(from_file["n"], 10);
    assert_eq!(from_file["theta"], 0.5);

    let overridden = ok_json(&["summate", "--config", &p, "--n", "5"]);
    assert_eq!(overridden["n"], 5);
    assert_eq!(overridden["theta"], 0.5);

    std::fs::write(&cfg, "unknown_key = 3\n").unwrap();
    assert_eq!(code(&["summate", "--config", &p]), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn single_point_grid() {
    let out = eisum(&["residual-grid", "--grid", "2,0,0.1,1,1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "re,im,log10_residual");
    assert_eq!(lines.len(), 2);
    let r: f64 = lines[1].rsplit(',').next().unwrap().parse().unwrap();
    assert!(r < -6.0, "{r}");
}

#[test]
fn lhp_preset_json() {
    let v = ok_json(&["residual-grid", "--n", "10", "--preset", "lhp", "--grid", "-1-1.5i,0.5,3,2", "--format", "json"]);
    assert_eq!(v["points"].as_array().unwrap().len(), 6);
    assert_eq!(v["n"], 10);
}

#[test]
fn greens_point_and_grid() {
    let out = eisum(&["greens", "--w", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<_> = text.lines().nth(1).unwrap().split(',').collect();
    let g: f64 = row[2].parse().unwrap();
    assert!((g - (2f64.sqrt() - 1.0)).abs() < 1e-15);
    assert_eq!(row[4], "false");

    let out = eisum(&["greens"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 41 * 41 + 1);
}

#[test]
fn ei_eval_both_strategies() {
    let o = ok_json(&["ei-eval", "--x", "3+2i"]);
    let d = ok_json(&["ei-eval", "--x", "3+2i", "--strategy", "dyadic"]);
    let re = |v: &Value| v["value"][0].as_str().unwrap().parse::<f64>().unwrap();
    let bound: f64 = d["remainder_bound"].as_str().unwrap().parse().unwrap();
    assert!((re(&o) - re(&d)).abs() <= bound.max(1e-15));
}

#[test]
fn summate_is_deterministic() {
    let a = eisum(&["summate", "--n", "12"]);
    let b = eisum(&["summate", "--n", "12"]);
    assert_eq!(a.stdout, b.stdout);
}
