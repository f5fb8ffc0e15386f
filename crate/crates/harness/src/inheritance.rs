// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use locfact_core::factor::{
    cholesky, lu_unpivoted, polar, qr, triangular_inverse, verify_elimination_bounds, verify_block_relation,
    EliminationBoundReport, BlockRelationReport, PolarSide, Triangle,
};
use locfact_core::series::{align_with_unit_diagonal, series_cholesky, series_lu_inverse, spd_rescale};
use locfact_core::SectionMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Method};
use crate::report::{measure, measure_rows, median, timestamp, CsvRow, Measures, Report, TrialError};
use crate::{run_in_pool, HarnessError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InheritanceRecord {
    pub size: usize,
    pub seed: u64,
    pub factor: Method,
    pub config_hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<TrialError>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<Measures>,
    #[serde(default)]
    pub objects: Vec<Measures>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elimination_bounds: Option<EliminationBoundReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_relation: Option<BlockRelationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds_error: Option<TrialError>,
}

/// Median fitted rate of one factor object over the seeds of one size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryEntry {
    pub size: usize,
    pub factor: Method,
    pub object: String,
    pub median_rate: f64,
    pub fits: usize,
}

impl SummaryEntry {
    pub fn key(&self) -> String {
        format!("n{}/{}/{}", self.size, self.factor.name(), self.object)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InheritanceReport {
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub generated_at: u64,
    pub records: Vec<InheritanceRecord>,
    pub summary: Vec<SummaryEntry>,
}

impl InheritanceReport {
    pub fn failures(&self) -> impl Iterator<Item = &InheritanceRecord> {
        self.records.iter().filter(|r| r.error.is_some())
    }

    pub fn summary_entry(&self, size: usize, factor: Method, object: &str) -> Option<&SummaryEntry> {
        self.summary.iter().find(|e| e.size == size && e.factor == factor && e.object == object)
    }
}

impl Report for InheritanceReport {
    fn rows(&self) -> Vec<CsvRow> {
        let mut rows = Vec::new();
        for r in &self.records {
            let (size, seed, f) = (Some(r.size), Some(r.seed), r.factor.name());
            if let Some(e) = &r.error {
                rows.push(CsvRow::text(size, seed, f, "error", e.kind.clone()));
                continue;
            }
            if let Some(input) = &r.input {
                rows.extend(measure_rows(r.size, r.seed, f, input));
            }
            for m in &r.objects {
                rows.extend(measure_rows(r.size, r.seed, f, m));
            }
            if let Some(res) = r.residual {
                rows.push(CsvRow::num(size, seed, f, "residual", res));
            }
            for (k, v) in &r.extra {
                rows.push(CsvRow::num(size, seed, f, k.clone(), *v));
            }
            if let Some(l) = &r.elimination_bounds {
                rows.push(CsvRow::num(size, seed, f, "elimination_bounds.max_violation", l.max_violation));
                rows.push(CsvRow::num(size, seed, f, "elimination_bounds.exact_relation_residual", l.exact_relation_residual));
            }
            if let Some(l) = &r.block_relation {
                rows.push(CsvRow::num(size, seed, f, "block_relation.discrepancy", l.discrepancy));
            }
        }
        rows
    }
}

struct Outcome {
    objects: Vec<(String, SectionMatrix)>,
    residual: f64,
    extra: BTreeMap<String, f64>,
}

fn lower_upper(l: SectionMatrix, u: SectionMatrix, residual: f64) -> locfact_core::Result<Outcome> {
    let l_inv = triangular_inverse(&l, Triangle::Lower)?;
    let u_inv = triangular_inverse(&u, Triangle::Upper)?;
    Ok(Outcome {
        objects: vec![("L".into(), l), ("U".into(), u), ("L_inv".into(), l_inv), ("U_inv".into(), u_inv)],
        residual,
        extra: BTreeMap::new(),
    })
}

fn factor(a: &SectionMatrix, method: Method, cfg: &ExperimentConfig) -> locfact_core::Result<Outcome> {
    let tol = &cfg.tolerances;
    match method {
        Method::Lu => {
            let r = lu_unpivoted(a, tol.pivot)?;
            let (l, u) = r.factors;
            lower_upper(l, u, r.residual)
        }
        Method::Cholesky | Method::SeriesCholesky => {
            let r = if method == Method::Cholesky {
                cholesky(a)?
            } else {
                series_cholesky(a, tol.series, tol.max_terms)?
            };
            let c = r.factors.0;
            let c_inv = triangular_inverse(&c, Triangle::Lower)?;
            Ok(Outcome {
                objects: vec![("C".into(), c), ("C_inv".into(), c_inv)],
                residual: r.residual,
                extra: BTreeMap::new(),
            })
        }
        Method::Qr => {
            let r = qr(a)?;
            let (q, rr) = r.factors;
            let r_inv = triangular_inverse(&rr, Triangle::Upper)?;
            Ok(Outcome {
                objects: vec![("Q".into(), q), ("R".into(), rr), ("R_inv".into(), r_inv)],
                residual: r.residual,
                extra: BTreeMap::new(),
            })
        }
        Method::Polar => {
            let r = polar(a, PolarSide::Right, tol.polar_iters, tol.polar)?;
            let (u, p) = r.factors;
            Ok(Outcome {
                objects: vec![("U_polar".into(), u), ("P".into(), p)],
                residual: r.residual,
                extra: BTreeMap::new(),
            })
        }
        Method::SeriesLu => {
            let (alpha, scaled) = if cfg.make_spd { spd_rescale(a)? } else { (1.0, a.clone()) };
            let sr = series_lu_inverse(&scaled, tol.series, tol.max_terms)?;
            let (l, u) = align_with_unit_diagonal(&sr)?;
            let residual = locfact_core::factor::reconstruction_residual(&scaled, &l, &u)?;
            let mut out = lower_upper(l, u, residual)?;
            out.extra.insert("series.alpha".into(), alpha);
            out.extra.insert("series.terms_used".into(), sr.terms_used as f64);
            out.extra.insert("series.tail".into(), sr.tail_estimate);
            Ok(out)
        }
    }
}

fn trial(cfg: &ExperimentConfig, hash: &str, size: usize, seed: u64) -> Vec<InheritanceRecord> {
    let blank = |method: Method| InheritanceRecord {
        size,
        seed,
        factor: method,
        config_hash: hash.to_string(),
        error: None,
        input: None,
        objects: Vec::new(),
        residual: None,
        extra: BTreeMap::new(),
        elimination_bounds: None,
        block_relation: None,
        bounds_error: None,
    };
    let prepared = cfg.input(size, seed).and_then(|a| {
        let m = measure("A", &a, cfg)?;
        Ok((a, m))
    });
    let (a, input) = match prepared {
        Ok(v) => v,
        Err(e) => {
            let err = TrialError::from(&e);
            return cfg.factorizations.iter().map(|&m| InheritanceRecord { error: Some(err.clone()), ..blank(m) }).collect();
        }
    };
    cfg.factorizations
        .iter()
        .map(|&method| {
            let mut rec = InheritanceRecord { input: Some(input.clone()), ..blank(method) };
            let measured = factor(&a, method, cfg).and_then(|out| {
                let objects = out.objects.iter().map(|(name, m)| measure(name, m, cfg)).collect::<Result<Vec<_>, _>>()?;
                Ok((objects, out.residual, out.extra))
            });
            match measured {
                Ok((objects, residual, extra)) => {
                    rec.objects = objects;
                    rec.residual = Some(residual);
                    rec.extra = extra;
                }
                Err(e) => rec.error = Some(TrialError::from(e)),
            }
            if method == Method::Lu && cfg.bound_checks && rec.error.is_none() {
                match verify_elimination_bounds(&a).and_then(|bounds| Ok((bounds, verify_block_relation(&a)?))) {
                    Ok((bounds, relation)) => {
                        rec.elimination_bounds = Some(bounds);
                        rec.block_relation = Some(relation);
                    }
                    Err(e) => rec.bounds_error = Some(TrialError::from(e)),
                }
            }
            rec
        })
        .collect()
}

pub fn summarize(records: &[InheritanceRecord]) -> Vec<SummaryEntry> {
    let mut groups: BTreeMap<(usize, Method, String), Vec<f64>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.error.is_none()) {
        for m in &r.objects {
            if let Some(rate) = m.rate() {
                groups.entry((r.size, r.factor, m.name.clone())).or_default().push(rate);
            }
        }
    }
    groups
        .into_iter()
        .filter_map(|((size, factor, object), mut v)| {
            let fits = v.len();
            median(&mut v).map(|median_rate| SummaryEntry { size, factor, object, median_rate, fits })
        })
        .collect()
}

/// Runs every `(size, seed)` trial, in parallel on `jobs` threads when given.
pub fn run_inheritance(cfg: &ExperimentConfig, jobs: Option<usize>) -> Result<InheritanceReport, HarnessError> {
    cfg.validate()?;
    let hash = cfg.hash();
    let trials: Vec<(usize, u64)> =
        cfg.sizes.iter().flat_map(|&n| cfg.seeds.iter().map(move |&s| (n, s))).collect();
    let mut records: Vec<InheritanceRecord> = run_in_pool(jobs, || {
        trials.par_iter().flat_map_iter(|&(n, s)| trial(cfg, &hash, n, s)).collect()
    })?;
    records.sort_by_key(|a| (a.size, a.seed, a.factor));
    let summary = summarize(&records);
    Ok(InheritanceReport { config: cfg.clone(), config_hash: hash, generated_at: timestamp(), records, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_json(text).unwrap()
    }

    #[test]
    fn identity_symbol_is_degenerate() {
        let c = cfg(r#"{"name":"id","matrix_class":{"kind":"laurent","symbol":{"offsets":[0],"re":[1.0]}},
            "sizes":[8],"seeds":[1],"factorizations":["lu","cholesky","qr","polar"],"fit":"polynomial","bound_checks":true}"#);
        let r = run_inheritance(&c, Some(1)).unwrap();
        assert_eq!(r.records.len(), 4);
        for rec in &r.records {
            assert!(rec.error.is_none(), "{rec:?}");
            assert_eq!(rec.residual, Some(0.0));
            for m in &rec.objects {
                assert!(m.fit.is_none());
                assert_eq!(m.fit_error.as_ref().unwrap().kind, "too_few_points");
            }
        }
        assert_eq!(r.records[0].elimination_bounds.as_ref().unwrap().max_violation, 0.0);
        assert!(r.summary.is_empty());
    }

    #[test]
    fn failures_are_isolated() {
        // a banded matrix with zero diagonal breaks unpivoted LU but not QR
        let c = cfg(r#"{"name":"zero-diag","matrix_class":{"kind":"laurent","symbol":{"offsets":[-1,1],"re":[1.0,1.0]}},
            "sizes":[4],"seeds":[1,2],"factorizations":["lu","qr"],"fit":"exponential"}"#);
        let r = run_inheritance(&c, Some(2)).unwrap();
        assert_eq!(r.records.len(), 4);
        let lu: Vec<_> = r.records.iter().filter(|x| x.factor == Method::Lu).collect();
        assert!(lu.iter().all(|x| x.error.as_ref().unwrap().kind == "pivot_breakdown"));
        let rows = r.rows();
        assert!(rows.iter().any(|x| x.metric == "error" && x.value == "pivot_breakdown"));
    }

    #[test]
    fn records_sorted_and_deterministic() {
        let c = cfg(r#"{"name":"det","matrix_class":{"kind":"jaffard","s":2.0,"c":1.0},"make_spd":true,
            "sizes":[16,8],"seeds":[3,1,2],"factorizations":["qr","lu","cholesky"],"fit":"polynomial"}"#);
        let a = run_inheritance(&c, Some(3)).unwrap();
        let b = run_inheritance(&c, Some(1)).unwrap();
        let keys: Vec<_> = a.records.iter().map(|r| (r.size, r.seed, r.factor)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(a.records, b.records);
        assert_eq!(a.summary, b.summary);
        assert!(a.records.iter().all(|r| r.config_hash == a.config_hash));
    }
}
