// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

use locfact_core::spectral::{
    factor_vs_section_cholesky, paley_wiener_check, spectral_factor, CholeskyComparison, PaleyWienerReport,
    SpectralRecord,
};
use locfact_core::SymbolSeries;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, NamedSymbol, SpectralSettings};
use crate::report::{timestamp, CsvRow, Report, TrialError};
use crate::{run_in_pool, HarnessError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolTrial {
    pub name: String,
    pub config_hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<TrialError>,
    pub paley_wiener: Option<PaleyWienerReport>,
    pub factor: Option<SpectralRecord>,
    /// `[re, im]` of the leading `sigma_L` coefficients.
    pub leading: Vec<[f64; 2]>,
    pub cholesky: Option<CholeskyComparison>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cholesky_error: Option<TrialError>,
    /// `max_m |sigma_L[m]|` change when the grid is doubled.
    pub grid_doubling_change: Option<f64>,
    /// `max_m |sigma_U[-m] - conj(sigma_L[m])|`.
    pub conjugate_symmetry_defect: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub generated_at: u64,
    pub symbols: Vec<SymbolTrial>,
}

impl SpectralReport {
    pub fn failures(&self) -> usize {
        self.symbols.iter().filter(|t| t.error.is_some() || t.cholesky_error.is_some()).count()
    }

    pub fn symbol(&self, name: &str) -> Option<&SymbolTrial> {
        self.symbols.iter().find(|t| t.name == name)
    }
}

impl Report for SpectralReport {
    fn rows(&self) -> Vec<CsvRow> {
        let mut rows = Vec::new();
        for t in &self.symbols {
            let f = t.name.as_str();
            if let Some(e) = &t.error {
                rows.push(CsvRow::text(None, None, f, "error", e.kind.clone()));
            }
            if let Some(pw) = &t.paley_wiener {
                rows.push(CsvRow::text(None, None, f, "paley_wiener_pass", pw.pass.to_string()));
                rows.push(CsvRow::num(None, None, f, "min_sample", pw.min_sample));
            }
            if let Some(r) = &t.factor {
                rows.push(CsvRow::num(None, None, f, "recon_err", r.recon_err));
                if let Some(rho) = r.rho_hat {
                    rows.push(CsvRow::num(None, None, f, "rho_hat", rho));
                }
            }
            for (m, c) in t.leading.iter().enumerate() {
                rows.push(CsvRow::num(None, None, f, format!("sigma_l_{m}_re"), c[0]));
                rows.push(CsvRow::num(None, None, f, format!("sigma_l_{m}_im"), c[1]));
            }
            if let Some(c) = &t.cholesky {
                rows.push(CsvRow::num(None, None, f, "cholesky_discrepancy", c.max_discrepancy));
            }
            if let Some(e) = &t.cholesky_error {
                rows.push(CsvRow::text(None, None, f, "cholesky_error", e.kind.clone()));
            }
            if let Some(d) = t.grid_doubling_change {
                rows.push(CsvRow::num(None, None, f, "grid_doubling_change", d));
            }
            if let Some(d) = t.conjugate_symmetry_defect {
                rows.push(CsvRow::num(None, None, f, "conjugate_symmetry_defect", d));
            }
        }
        rows
    }
}

fn trial(named: &NamedSymbol, settings: &SpectralSettings, hash: &str) -> SymbolTrial {
    let mut out = SymbolTrial {
        name: named.name.clone(),
        config_hash: hash.to_string(),
        error: None,
        paley_wiener: None,
        factor: None,
        leading: Vec::new(),
        cholesky: None,
        cholesky_error: None,
        grid_doubling_change: None,
        conjugate_symmetry_defect: None,
    };
    let grid = settings.grid;
    let main = (|| -> locfact_core::Result<SymbolSeries> {
        let sym = SymbolSeries::from_file(&named.symbol)?;
        out.paley_wiener = Some(paley_wiener_check(&sym, grid, None)?);
        let f = spectral_factor(&sym, grid)?;
        out.factor = Some(f.record()?);
        out.leading = (0..settings.report_coeffs as i64)
            .map(|m| {
                let c = f.sigma_l.coeff(m);
                [c.re, c.im]
            })
            .collect();
        let half = grid as i64 / 2;
        let fine = spectral_factor(&sym, 2 * grid)?;
        out.grid_doubling_change =
            Some((0..half).map(|m| (f.sigma_l.coeff(m) - fine.sigma_l.coeff(m)).norm()).fold(0.0, f64::max));
        out.conjugate_symmetry_defect = Some(
            (0..half).map(|m| (f.sigma_u.coeff(-m) - f.sigma_l.coeff(m).conj()).norm()).fold(0.0, f64::max),
        );
        Ok(sym)
    })();
    match main {
        Ok(sym) => match factor_vs_section_cholesky(&sym, settings.section_n, grid) {
            Ok(c) => out.cholesky = Some(c),
            Err(e) => out.cholesky_error = Some(e.into()),
        },
        Err(e) => out.error = Some(e.into()),
    }
    out
}

pub fn run_spectral(cfg: &ExperimentConfig, jobs: Option<usize>) -> Result<SpectralReport, HarnessError> {
    cfg.validate()?;
    let settings = cfg
        .spectral
        .as_ref()
        .ok_or_else(|| HarnessError::Config("the spectral suite needs a \"spectral\" section".into()))?;
    let hash = cfg.hash();
    // symbols keep their configured order
    let symbols = run_in_pool(jobs, || settings.symbols.par_iter().map(|s| trial(s, settings, &hash)).collect())?;
    Ok(SpectralReport { config: cfg.clone(), config_hash: hash, generated_at: timestamp(), symbols })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(symbols: &str) -> ExperimentConfig {
        ExperimentConfig::from_json(&format!(
            r#"{{"name":"sp","fit":"exponential","spectral":{{"symbols":{symbols},"grid":512,"section_n":32}}}}"#
        ))
        .unwrap()
    }

    #[test]
    fn constant_symbol_is_trivial() {
        let r = run_spectral(&cfg(r#"[{"name":"one","symbol":{"offsets":[0],"re":[1.0]}}]"#), None).unwrap();
        let t = r.symbol("one").unwrap();
        assert!(t.error.is_none());
        assert!(t.paley_wiener.as_ref().unwrap().pass);
        assert!((t.leading[0][0] - 1.0).abs() < 1e-14);
        assert!(t.leading[1..].iter().all(|c| c[0].abs() < 1e-14 && c[1].abs() < 1e-14));
        assert!(t.cholesky.as_ref().unwrap().max_discrepancy < 1e-14);
    }

    #[test]
    fn two_plus_cos() {
        let r = run_spectral(&cfg(r#"[{"name":"2+cos","symbol":{"offsets":[-1,0,1],"re":[0.5,2.0,0.5]}}]"#), None)
            .unwrap();
        let t = r.symbol("2+cos").unwrap();
        let s3 = 3f64.sqrt();
        assert!((t.leading[0][0] - (1.0 + s3) / 2.0).abs() < 1e-8);
        assert!((t.leading[1][0] - (s3 - 1.0) / 2.0).abs() < 1e-8);
        assert!(t.conjugate_symmetry_defect.unwrap() < 1e-10);
        assert!(t.grid_doubling_change.unwrap() < 1e-10);
    }

    #[test]
    fn vanishing_symbol_fails_paley_wiener() {
        // 1 - cos has a zero on the circle
        let r = run_spectral(&cfg(r#"[{"name":"1-cos","symbol":{"offsets":[-1,0,1],"re":[-0.5,1.0,-0.5]}}]"#), None)
            .unwrap();
        let t = r.symbol("1-cos").unwrap();
        assert!(t.error.is_some() || !t.paley_wiener.as_ref().unwrap().pass);
        assert_eq!(r.failures(), 1);
    }
}
