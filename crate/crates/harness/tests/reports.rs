// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

use locfact_harness::config::{ExperimentConfig, Method};
use locfact_harness::report::{emit, load, to_json, Format, Report};
use locfact_harness::{run_funcalc, run_inheritance, run_series_validation, run_spectral};

fn cfg(text: &str) -> ExperimentConfig {
    ExperimentConfig::from_json(text).unwrap()
}

fn inheritance_cfg() -> ExperimentConfig {
    cfg(r#"{"name":"r","matrix_class":{"kind":"jaffard","s":2.0,"c":1.0},"make_spd":true,
        "sizes":[24,12],"seeds":[5,4],"factorizations":["polar","series_lu","lu","cholesky","qr","series_cholesky"],
        "fit":"polynomial","bound_checks":true}"#)
}

fn roundtrip<R: Report + PartialEq + std::fmt::Debug>(report: &R) {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    emit(report, Format::Json, &p).unwrap();
    let back: R = load(&p).unwrap();
    assert_eq!(&back, report);
    let csv = dir.path().join("r.csv");
    emit(report, Format::Csv, &csv).unwrap();
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), report.rows().len() + 1);
}

#[test]
fn json_roundtrip_is_exact() {
    roundtrip(&run_inheritance(&inheritance_cfg(), None).unwrap());
    roundtrip(
        &run_series_validation(
            &cfg(r#"{"name":"s","matrix_class":{"kind":"expdecay","gamma":0.5,"c":1.0},"make_spd":true,
                "sizes":[10],"seeds":[1],"fit":"exponential","series":{}}"#),
            None,
        )
        .unwrap(),
    );
    roundtrip(
        &run_spectral(
            &cfg(r#"{"name":"p","fit":"exponential","spectral":{"symbols":[
                {"name":"a","symbol":{"offsets":[-1,0,1],"re":[0.5,2.0,0.5]}}],"grid":256,"section_n":16}}"#),
            None,
        )
        .unwrap(),
    );
    roundtrip(
        &run_funcalc(
            &cfg(r#"{"name":"f","matrix_class":{"kind":"banded","bandwidth":2},"sizes":[6],"seeds":[1],
                "fit":"exponential","funcalc":{"functions":["exp","inverse"]}}"#),
            None,
        )
        .unwrap(),
    );
}

#[test]
fn reports_are_deterministic_modulo_timestamp() {
    let c = inheritance_cfg();
    let mut a = run_inheritance(&c, Some(1)).unwrap();
    let mut b = run_inheritance(&c, Some(4)).unwrap();
    a.generated_at = 0;
    b.generated_at = 0;
    assert_eq!(to_json(&a).unwrap(), to_json(&b).unwrap());
}

#[test]
fn every_record_carries_seed_and_hash() {
    let c = inheritance_cfg();
    let r = run_inheritance(&c, None).unwrap();
    assert_eq!(r.records.len(), 2 * 2 * 6);
    assert!(r.records.iter().all(|x| x.config_hash == c.hash()));
    let keys: Vec<(usize, u64, Method)> = r.records.iter().map(|x| (x.size, x.seed, x.factor)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(r.records.iter().all(|x| x.error.is_none()), "{:?}", r.failures().next());
    let lu = r.records.iter().find(|x| x.factor == Method::Lu).unwrap();
    assert!(lu.elimination_bounds.is_some() && lu.block_relation.is_some());
    let series = r.records.iter().find(|x| x.factor == Method::SeriesLu).unwrap();
    assert!(series.extra["series.terms_used"] > 0.0);
    let objects: Vec<&str> = lu.objects.iter().map(|m| m.name.as_str()).collect();
    assert_eq!(objects, ["L", "U", "L_inv", "U_inv"]);
}

#[test]
fn failed_trials_do_not_abort_the_run() {
    // non-Hermitian input: Cholesky and series Cholesky fail, the rest succeed
    let c = cfg(r#"{"name":"iso","matrix_class":{"kind":"laurent","symbol":{"offsets":[-1,0,1],"re":[1.0,4.0,0.5]}},
        "sizes":[10],"seeds":[1],"factorizations":["lu","cholesky","qr","series_cholesky"],"fit":"exponential"}"#);
    let r = run_inheritance(&c, None).unwrap();
    let kinds: Vec<(Method, Option<String>)> =
        r.records.iter().map(|x| (x.factor, x.error.as_ref().map(|e| e.kind.clone()))).collect();
    assert_eq!(
        kinds,
        [
            (Method::Lu, None),
            (Method::Cholesky, Some("not_hermitian".into())),
            (Method::Qr, None),
            (Method::SeriesCholesky, Some("not_hermitian".into())),
        ]
    );
    assert!(r.failures().all(|x| x.objects.is_empty() && !x.error.as_ref().unwrap().message.is_empty()));
}
