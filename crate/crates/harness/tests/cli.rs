// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn locfact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locfact")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SMALL: &str = r#"{"name":"small","matrix_class":{"kind":"expdecay","gamma":0.5,"c":1.0},"make_spd":true,
    "sizes":[24],"seeds":[1,2],"factorizations":["lu","cholesky","qr"],"fit":"exponential"}"#;

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&locfact(&["--help"])), 0);
    assert_eq!(code(&locfact(&["--version"])), 0);
    let o = locfact(&["inherit", "--help"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("--write-baseline"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&locfact(&[])), 1);
    assert_eq!(code(&locfact(&["frobnicate"])), 1);
    assert_eq!(code(&locfact(&["inherit"])), 1);
    assert_eq!(code(&locfact(&["inherit", "--config", "/nonexistent/cfg.json"])), 1);
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"name":"x","fit":"polynomial","factorizations":["cholesky"]}"#);
    let o = locfact(&["inherit", "--config", &bad]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid configuration"));
    let cfg = write(dir.path(), "small.json", SMALL);
    assert_eq!(code(&locfact(&["inherit", "--config", &cfg, "--format", "xml"])), 1);
    assert_eq!(code(&locfact(&["inherit", "--config", &cfg, "--jobs", "0"])), 1);
}

#[test]
fn gen_norms_factor_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let cfg = write(dir.path(), "small.json", SMALL);
    let o = locfact(&["gen", "--config", &cfg, "--size", "6", "--seed", "3", "--out", out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let matrix = dir.path().join("matrix_n6_seed3.json");
    let a = locfact_core::matrix::io::read_matrix(&matrix).unwrap();
    assert_eq!(a.n(), 6);

    let o = locfact(&["norms", matrix.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let norms: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for k in ["jaffard", "weighted", "schur", "gbs"] {
        assert!(norms[k].as_f64().unwrap() > 0.0);
    }

    for method in ["lu", "cholesky", "qr", "polar", "series_lu", "series_cholesky"] {
        let o = locfact(&["factor", matrix.to_str().unwrap(), "--method", method, "--out", out]);
        assert_eq!(code(&o), 0, "{method}: {}", String::from_utf8_lossy(&o.stderr));
        let rec: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(rec["residual"].as_f64().unwrap() < 1e-10, "{method}");
        let f1 = locfact_core::matrix::io::read_matrix(dir.path().join(format!("{method}_f1.json"))).unwrap();
        let f2 = locfact_core::matrix::io::read_matrix(dir.path().join(format!("{method}_f2.json"))).unwrap();
        assert_eq!((f1.n(), f2.n()), (6, 6));
    }
}

#[test]
fn numerical_failure_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    // indefinite Hermitian matrix: Cholesky breaks down
    let m = write(dir.path(), "m.json", r#"{"n":1,"re":[[1,0,0],[0,-1,0],[0,0,1]]}"#);
    let o = locfact(&["factor", &m, "--method", "cholesky", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("positive definite"));
    // zero pivot for unpivoted LU
    let z = write(dir.path(), "z.json", r#"{"n":1,"re":[[0,1,0],[1,0,0],[0,0,1]]}"#);
    assert_eq!(code(&locfact(&["factor", &z, "--method", "lu"])), 2);
    assert_eq!(code(&locfact(&["factor", &z, "--method", "svd"])), 1);
}

#[test]
fn inherit_writes_reports_and_converts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let cfg = write(dir.path(), "small.json", SMALL);
    let o = locfact(&["inherit", "--config", &cfg, "--out", out, "--jobs", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let json = dir.path().join("inherit_small.json");
    let report: locfact_harness::InheritanceReport = locfact_harness::report::load(&json).unwrap();
    assert_eq!(report.records.len(), 6);

    let conv = dir.path().join("csv");
    let o = locfact(&["report", json.to_str().unwrap(), "--out", conv.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(conv.join("inherit_small.csv")).unwrap();
    use locfact_harness::report::Report;
    assert_eq!(csv.lines().count(), report.rows().len() + 1);
    assert!(csv.starts_with("size,seed,factor,metric,value\n"));

    let o = locfact(&["inherit", "--config", &cfg, "--out", out, "--format", "csv", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    let csv = std::fs::read_to_string(dir.path().join("inherit_small.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.split(',').nth(1) == Some("7")));

    let junk = write(dir.path(), "junk.json", r#"{"hello":1}"#);
    assert_eq!(code(&locfact(&["report", &junk, "--out", out])), 1);
}

#[test]
fn strict_baseline_violation_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let cfg = write(dir.path(), "small.json", SMALL);
    let base = dir.path().join("base.json");
    let o = locfact(&["inherit", "--config", &cfg, "--out", out, "--write-baseline", base.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let args = ["inherit", "--config", &cfg, "--out", out, "--strict", "--baseline", base.to_str().unwrap()];
    assert_eq!(code(&locfact(&args)), 0);

    let mut b: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&base).unwrap()).unwrap();
    b["thresholds"]["exponential_max"] = serde_json::json!(0.2);
    std::fs::write(&base, b.to_string()).unwrap();
    let o = locfact(&args);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("threshold violation"));
    // without --strict the violation is only reported
    let o = locfact(&["inherit", "--config", &cfg, "--out", out, "--baseline", base.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
}

#[test]
fn suites_run_from_shipped_configs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let spectral = configs().join("spectral.json");
    let o = locfact(&["spectral", "--config", spectral.to_str().unwrap(), "--out", out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("spectral_symbols.json").exists());

    let smoke = configs().join("smoke.json");
    let o = locfact(&["inherit", "--config", smoke.to_str().unwrap(), "--out", out, "--format", "csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    let small_series = write(
        dir.path(),
        "series.json",
        r#"{"name":"s","matrix_class":{"kind":"expdecay","gamma":0.5,"c":1.0},"make_spd":true,
            "sizes":[12],"seeds":[1],"fit":"exponential","series":{}}"#,
    );
    assert_eq!(code(&locfact(&["series", "--config", &small_series, "--out", out])), 0);
    let small_fc = write(
        dir.path(),
        "fc.json",
        r#"{"name":"f","matrix_class":{"kind":"expdecay","gamma":0.5,"c":1.0},"make_spd":true,
            "sizes":[12],"seeds":[1],"fit":"exponential","funcalc":{}}"#,
    );
    assert_eq!(code(&locfact(&["funcalc", "--config", &small_fc, "--out", out])), 0);
    // a failing trial in a validation suite is a numerical failure
    let bad_series = write(
        dir.path(),
        "bad_series.json",
        r#"{"name":"b","matrix_class":{"kind":"laurent","symbol":{"offsets":[-1,1],"re":[2.0,0.0]}},
            "sizes":[4],"seeds":[1],"fit":"exponential","series":{"contraction_cap":null}}"#,
    );
    assert_eq!(code(&locfact(&["series", "--config", &bad_series, "--out", out])), 2);
}
