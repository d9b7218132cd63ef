use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn curvlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvlab")).args(args).env("CURVLAB_THREADS", "1").output().unwrap()
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn sphere_lower_scan_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = curvlab(&["curvature", "--metric", "constk(1)", "--k", "1", "--dir", "lower", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(dir.path());
    assert_eq!(r["status"], "pass");
    assert!(dir.path().join("curvature.csv").exists());
    let entries = r["results"]["bound_scan"]["entries"].as_array().unwrap();
    let last = entries.last().unwrap();
    assert!(last["pass"].as_bool().unwrap());
    assert!(last["violation"].as_f64().unwrap() <= 1e-3);
}

#[test]
fn flat_plane_fails_cbb_half() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = curvlab(&["compare", "--metric", "flat", "--mode", "cbb", "--k", "0.5", "--out", out]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(dir.path());
    assert_eq!(r["status"], "fail");
    assert!(r["results"]["sweep"]["failures"].as_u64().unwrap() >= 1);
    assert!(dir.path().join("verdicts.csv").exists());
}

#[test]
fn invalid_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for args in [
        vec!["curvature", "--metric", "torus(2)", "--out", out],
        vec!["compare", "--metric", "flat", "--mode", "cbb", "--out", out],
        vec!["compare", "--metric", "flat", "--mode", "sideways", "--k", "0", "--out", out],
        vec!["mollify", "--metric", "hw1(1.5)", "--eps", "0.05,0.1", "--out", out],
        vec!["example", "hw1", "--lambda", "2.5", "--out", out],
        vec!["geodesic", "--metric", "flat", "--out", out],
        vec!["frobnicate"],
    ] {
        let o = curvlab(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert!(!dir.path().join("report.json").exists());
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"metric": "flat", "colour": "red"}"#).unwrap();
    let o = curvlab(&["curvature", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let out = dir.path().join("out");
    std::fs::write(
        &cfg,
        format!(r#"{{"metric": "constk(-1)", "mode": "cat", "k": -1.0, "samples": 50, "out": "{}"}}"#, out.display()),
    )
    .unwrap();
    let o = curvlab(&["compare", "--config", cfg.to_str().unwrap(), "--samples", "70", "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out);
    assert_eq!(r["config"]["samples"], 70);
    assert_eq!(r["config"]["seed"], 9);
    assert_eq!(r["config"]["metric"], "constk(-1)");
}

#[test]
fn embedded_config_reproduces_the_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let o = curvlab(&[
        "compare",
        "--metric",
        "hw1(1.5)",
        "--mode",
        "cat",
        "--k",
        "0.5",
        "--samples",
        "12",
        "--seed",
        "3",
        "--out",
        first.to_str().unwrap(),
    ]);
    assert!(matches!(o.status.code(), Some(0 | 1)), "{}", String::from_utf8_lossy(&o.stderr));
    let r1 = report(&first);

    let second = dir.path().join("second");
    let mut cfg = r1["config"].clone();
    cfg["out"] = Value::from(second.to_str().unwrap());
    let cfg_path = dir.path().join("again.json");
    std::fs::write(&cfg_path, cfg.to_string()).unwrap();
    let o = curvlab(&["compare", "--config", cfg_path.to_str().unwrap()]);
    assert!(matches!(o.status.code(), Some(0 | 1)));
    let r2 = report(&second);

    assert_eq!(r1["results"], r2["results"]);
    assert_eq!(r1["status"], r2["status"]);
    let v1 = std::fs::read(first.join("verdicts.csv")).unwrap();
    let v2 = std::fs::read(second.join("verdicts.csv")).unwrap();
    assert_eq!(v1, v2);
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(threads);
        let o = Command::new(env!("CARGO_BIN_EXE_curvlab"))
            .args(["compare", "--metric", "constk(1)", "--mode", "cbb", "--k", "1.2", "--samples", "400"])
            .args(["--out", out.to_str().unwrap()])
            .env("CURVLAB_THREADS", threads)
            .output()
            .unwrap();
        assert!(matches!(o.status.code(), Some(0 | 1)));
        reports.push(report(&out));
    }
    assert_eq!(reports[0]["results"], reports[1]["results"]);
    assert_eq!(reports[1]["threads"], 3);
}

#[test]
fn geodesic_integration_writes_the_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = curvlab(&["geodesic", "--metric", "constk(1)", "--p", "0,0", "--v", "0.5,0", "--time", "1", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows: Vec<curvlab::io::PathRow> = curvlab::io::read_rows(&dir.path().join("ivp.csv")).unwrap();
    let last = rows.last().unwrap();
    assert!((last.x - 0.5f64.tan()).abs() < 1e-6, "{}", last.x);
}

#[test]
fn mollify_exports_each_scale() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = curvlab(&["mollify", "--metric", "hw1(1.5)", "--eps", "0.2,0.1", "--resolution", "24", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for i in 0..2 {
        let m = curvlab::io::read_sampled_metric(&dir.path().join(format!("smoothed_{i}.csv"))).unwrap();
        assert_eq!(m.grid().len(), 24 * 24);
    }
}

#[test]
fn negative_coordinates_parse() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = curvlab(&[
        "compare",
        "--metric",
        "constk(-1)",
        "--mode",
        "cat",
        "--bracket",
        "-3,1",
        "--region",
        "-0.5,0.5,-0.5,0.5",
        "--samples",
        "300",
        "--out",
        out,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let k = report(dir.path())["results"]["critical_curvature"]["k"].as_f64().unwrap();
    assert!((k + 1.0).abs() < 0.05, "{k}");
}
