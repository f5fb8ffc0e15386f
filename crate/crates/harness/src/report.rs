// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use locfact_core::norms::{
    fit_exponential, fit_polynomial, norm_gbs, norm_jaffard, norm_schur, norm_weighted, profile, FitRecord, FitWindow,
};
use locfact_core::SectionMatrix;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, FitKind, NormKind};
use crate::HarnessError;

/// A failed trial keeps the error variant name and its message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialError {
    pub kind: String,
    pub message: String,
}

impl From<&locfact_core::Error> for TrialError {
    fn from(e: &locfact_core::Error) -> Self {
        TrialError { kind: e.kind().to_string(), message: e.to_string() }
    }
}

impl From<locfact_core::Error> for TrialError {
    fn from(e: locfact_core::Error) -> Self {
        TrialError::from(&e)
    }
}

/// Norms and decay fit of one matrix, measured on the interior window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measures {
    pub name: String,
    pub norms: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_error: Option<TrialError>,
}

impl Measures {
    pub fn rate(&self) -> Option<f64> {
        let f = self.fit.as_ref()?;
        f.s_hat.or(f.gamma_hat)
    }
}

pub fn measure(name: &str, a: &SectionMatrix, cfg: &ExperimentConfig) -> Result<Measures, locfact_core::Error> {
    let n = a.n();
    let margin = cfg.margin(n);
    let interior = a.interior(margin)?;
    let mut norms = BTreeMap::new();
    for kind in &cfg.norms {
        let v = match kind {
            NormKind::Jaffard => norm_jaffard(&interior, cfg.jaffard_s),
            NormKind::Weighted => norm_weighted(&interior, &cfg.weight)?,
            NormKind::Schur => norm_schur(&interior, &cfg.weight)?,
            NormKind::Gbs => norm_gbs(&interior, &cfg.weight)?,
        };
        norms.insert(kind.name().to_string(), v);
    }
    let p = profile(a, margin)?;
    let window = FitWindow::default_for(n);
    let fit = match cfg.fit {
        FitKind::Polynomial => fit_polynomial(&p, window),
        FitKind::Exponential => fit_exponential(&p, window),
    };
    let (fit, fit_error) = match fit {
        Ok(f) => (Some(f.record()), None),
        Err(e) => (None, Some(TrialError::from(e))),
    };
    Ok(Measures { name: name.to_string(), norms, fit, fit_error })
}

/// One CSV row: `size,seed,factor,metric,value`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub size: Option<usize>,
    pub seed: Option<u64>,
    pub factor: String,
    pub metric: String,
    pub value: String,
}

impl CsvRow {
    pub fn num(size: Option<usize>, seed: Option<u64>, factor: &str, metric: impl Into<String>, value: f64) -> Self {
        CsvRow { size, seed, factor: factor.to_string(), metric: metric.into(), value: format!("{value:e}") }
    }

    pub fn text(size: Option<usize>, seed: Option<u64>, factor: &str, metric: impl Into<String>, value: impl Into<String>) -> Self {
        CsvRow { size, seed, factor: factor.to_string(), metric: metric.into(), value: value.into() }
    }
}

pub fn measure_rows(size: usize, seed: u64, factor: &str, m: &Measures) -> Vec<CsvRow> {
    let mut rows = Vec::new();
    for (k, v) in &m.norms {
        rows.push(CsvRow::num(Some(size), Some(seed), factor, format!("{}.norm_{k}", m.name), *v));
    }
    if let Some(f) = &m.fit {
        if let Some(r) = f.s_hat.or(f.gamma_hat) {
            rows.push(CsvRow::num(Some(size), Some(seed), factor, format!("{}.fit_rate", m.name), r));
        }
        rows.push(CsvRow::num(Some(size), Some(seed), factor, format!("{}.fit_c", m.name), f.c_hat));
        rows.push(CsvRow::num(Some(size), Some(seed), factor, format!("{}.fit_r2", m.name), f.r2));
    }
    if let Some(e) = &m.fit_error {
        rows.push(CsvRow::text(Some(size), Some(seed), factor, format!("{}.fit_error", m.name), e.kind.clone()));
    }
    rows
}

/// Reports that can be written as CSV rows and as JSON.
pub trait Report: Serialize + DeserializeOwned {
    fn rows(&self) -> Vec<CsvRow>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(HarnessError::Config(format!("unknown format {other:?}"))),
        }
    }
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

pub fn to_csv(rows: &[CsvRow]) -> Result<String, HarnessError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(["size", "seed", "factor", "metric", "value"])?;
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn to_json<R: Report>(report: &R) -> Result<String, HarnessError> {
    Ok(serde_json::to_string_pretty(report)?)
}

pub fn emit<R: Report>(report: &R, format: Format, path: &Path) -> Result<(), HarnessError> {
    let text = match format {
        Format::Csv => to_csv(&report.rows())?,
        Format::Json => to_json(report)?,
    };
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load<R: Report>(path: &Path) -> Result<R, HarnessError> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

/// Seconds since the Unix epoch; the only nondeterministic report field.
pub fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let k = values.len();
    Some(if k % 2 == 1 { values[k / 2] } else { 0.5 * (values[k / 2 - 1] + values[k / 2]) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_csv_has_header_only() {
        assert_eq!(to_csv(&[]).unwrap(), "size,seed,factor,metric,value\n");
    }

    #[test]
    fn csv_rows_and_quoting() {
        let rows = vec![
            CsvRow::num(Some(8), Some(1), "lu", "residual", 1.5e-16),
            CsvRow::text(None, None, "2+cos", "note", "a,b"),
        ];
        let s = to_csv(&rows).unwrap();
        assert_eq!(s, "size,seed,factor,metric,value\n8,1,lu,residual,1.5e-16\n,,2+cos,note,\"a,b\"\n");
    }

    #[test]
    fn median_odd_even() {
        assert_eq!(median(&mut []), None);
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), Some(2.5));
    }
}
