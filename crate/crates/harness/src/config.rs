// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::Path;

use locfact_core::funcs::ScalarFunction;
use locfact_core::matrix::{generate_banded, generate_expdecay, generate_jaffard, laurent_from_symbol, make_spd};
use locfact_core::matrix::SymbolFile;
use locfact_core::{SectionMatrix, SymbolSeries, Weight};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::HarnessError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MatrixClass {
    Jaffard { s: f64, c: f64 },
    Expdecay { gamma: f64, c: f64 },
    Banded { bandwidth: usize },
    Laurent { symbol: SymbolFile },
}

impl MatrixClass {
    pub fn generate(&self, n: usize, seed: u64) -> locfact_core::Result<SectionMatrix> {
        match self {
            MatrixClass::Jaffard { s, c } => generate_jaffard(n, *s, *c, seed),
            MatrixClass::Expdecay { gamma, c } => generate_expdecay(n, *gamma, *c, seed),
            MatrixClass::Banded { bandwidth } => generate_banded(n, *bandwidth, seed),
            MatrixClass::Laurent { symbol } => laurent_from_symbol(&SymbolSeries::from_file(symbol)?, n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Lu,
    Cholesky,
    Qr,
    Polar,
    SeriesLu,
    SeriesCholesky,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Lu => "lu",
            Method::Cholesky => "cholesky",
            Method::Qr => "qr",
            Method::Polar => "polar",
            Method::SeriesLu => "series_lu",
            Method::SeriesCholesky => "series_cholesky",
        }
    }

    pub fn needs_spd(self) -> bool {
        matches!(self, Method::Cholesky | Method::SeriesCholesky)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    Jaffard,
    Weighted,
    Schur,
    Gbs,
}

impl NormKind {
    pub const ALL: [NormKind; 4] = [NormKind::Jaffard, NormKind::Weighted, NormKind::Schur, NormKind::Gbs];

    pub fn name(self) -> &'static str {
        match self {
            NormKind::Jaffard => "jaffard",
            NormKind::Weighted => "weighted",
            NormKind::Schur => "schur",
            NormKind::Gbs => "gbs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitKind {
    Polynomial,
    Exponential,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub pivot: f64,
    pub series: f64,
    pub max_terms: usize,
    pub polar: f64,
    pub polar_iters: usize,
    pub sqrt: f64,
    pub sqrt_iters: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            pivot: locfact_core::factor::DEFAULT_PIVOT_TOL,
            series: locfact_core::series::DEFAULT_SERIES_TOL,
            max_terms: locfact_core::series::DEFAULT_MAX_TERMS,
            polar: 1e-14,
            polar_iters: 100,
            sqrt: locfact_core::funcs::DEFAULT_SQRT_TOL,
            sqrt_iters: locfact_core::funcs::DEFAULT_SQRT_ITERS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SeriesSettings {
    /// Shrinks `M = alpha A - I` to this operator norm when it is larger.
    pub contraction_cap: Option<f64>,
    pub eps_grid: Vec<f64>,
}

impl Default for SeriesSettings {
    fn default() -> Self {
        SeriesSettings { contraction_cap: Some(0.8), eps_grid: (0..10).map(|i| 0.5 + 0.05 * i as f64).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedSymbol {
    pub name: String,
    pub symbol: SymbolFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSettings {
    pub symbols: Vec<NamedSymbol>,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_section_n")]
    pub section_n: usize,
    /// Number of leading `sigma_L` coefficients copied into the report.
    #[serde(default = "default_report_coeffs")]
    pub report_coeffs: usize,
}

fn default_grid() -> usize {
    4096
}

fn default_section_n() -> usize {
    128
}

fn default_report_coeffs() -> usize {
    4
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContourChoice {
    /// `trace / dim` center, radius `1.25 ||A - c I||`.
    Default,
    /// Center 0, radius `||A|| + 1`.
    OriginPlusOne,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FuncalcSettings {
    pub functions: Vec<ScalarFunction>,
    pub nodes: usize,
    /// Inputs are rescaled to this operator norm.
    pub target_norm: f64,
    pub contour: ContourChoice,
}

impl Default for FuncalcSettings {
    fn default() -> Self {
        FuncalcSettings {
            functions: vec![ScalarFunction::One, ScalarFunction::Identity, ScalarFunction::Exp],
            nodes: 64,
            target_norm: 2.0,
            contour: ContourChoice::OriginPlusOne,
        }
    }
}

fn default_weight() -> Weight {
    Weight::unit()
}

fn default_norms() -> Vec<NormKind> {
    NormKind::ALL.to_vec()
}

fn default_jaffard_s() -> f64 {
    2.0
}

fn default_spd_delta() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    #[serde(default)]
    pub matrix_class: Option<MatrixClass>,
    #[serde(default)]
    pub make_spd: bool,
    #[serde(default = "default_spd_delta")]
    pub spd_delta: f64,
    #[serde(default)]
    pub sizes: Vec<usize>,
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub factorizations: Vec<Method>,
    #[serde(default = "default_weight")]
    pub weight: Weight,
    #[serde(default = "default_norms")]
    pub norms: Vec<NormKind>,
    /// Exponent `s` used for the Jaffard norm.
    #[serde(default = "default_jaffard_s")]
    pub jaffard_s: f64,
    pub fit: FitKind,
    /// Defaults to `n / 2`.
    #[serde(default)]
    pub probe_margin: Option<usize>,
    #[serde(default)]
    pub bound_checks: bool,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub series: Option<SeriesSettings>,
    #[serde(default)]
    pub spectral: Option<SpectralSettings>,
    #[serde(default)]
    pub funcalc: Option<FuncalcSettings>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// SHA-256 of the compact JSON serialization.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn margin(&self, n: usize) -> usize {
        self.probe_margin.unwrap_or(n / 2)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let invalid = |msg: String| Err(HarnessError::Config(msg));
        let laurent = matches!(self.matrix_class, Some(MatrixClass::Laurent { .. }));
        for m in &self.factorizations {
            if m.needs_spd() && !self.make_spd && !laurent {
                return invalid(format!("{} requires make_spd", m.name()));
            }
        }
        if !self.factorizations.is_empty() || self.series.is_some() || self.funcalc.is_some() {
            if self.matrix_class.is_none() {
                return invalid("matrix_class is required for generated inputs".into());
            }
            if self.sizes.is_empty() || self.seeds.is_empty() {
                return invalid("sizes and seeds must be non-empty".into());
            }
        }
        if self.make_spd && self.spd_delta <= 0.0 {
            return invalid(format!("spd_delta must be positive, got {}", self.spd_delta));
        }
        for &n in &self.sizes {
            if n == 0 {
                return invalid("sizes must be positive".into());
            }
            if self.margin(n) >= n {
                return invalid(format!("probe margin {} must be below n = {n}", self.margin(n)));
            }
        }
        if let Some(sp) = &self.spectral {
            if sp.symbols.is_empty() {
                return invalid("spectral.symbols must be non-empty".into());
            }
            for s in &sp.symbols {
                SymbolSeries::from_file(&s.symbol).map_err(|e| HarnessError::Config(format!("symbol {}: {e}", s.name)))?;
            }
        }
        if let Some(sr) = &self.series {
            if sr.eps_grid.iter().any(|&e| !(e > 0.0 && e < 1.0)) {
                return invalid("eps_grid entries must lie in (0, 1)".into());
            }
        }
        Ok(())
    }

    /// The input section for a trial: generated, then optionally made SPD.
    pub fn input(&self, n: usize, seed: u64) -> locfact_core::Result<SectionMatrix> {
        let class = self.matrix_class.as_ref().ok_or_else(|| {
            locfact_core::Error::InvalidParameter("configuration has no matrix_class".into())
        })?;
        let a = class.generate(n, seed)?;
        if self.make_spd {
            make_spd(&a, self.spd_delta)
        } else {
            Ok(a)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> ExperimentConfig {
        ExperimentConfig::from_json(
            r#"{"name":"t","matrix_class":{"kind":"jaffard","s":2.0,"c":1.0},
                "sizes":[8],"seeds":[1,2],"factorizations":["lu","qr"],"fit":"polynomial"}"#,
        )
        .unwrap()
    }

    #[test]
    fn defaults_fill_in() {
        let cfg = minimal();
        assert_eq!(cfg.norms, NormKind::ALL.to_vec());
        assert_eq!(cfg.weight, Weight::unit());
        assert_eq!(cfg.margin(8), 4);
        assert_eq!(cfg.tolerances, Tolerances::default());
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = minimal();
        let mut b = minimal();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
        b.seeds.push(3);
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn cholesky_without_spd_is_rejected() {
        let err = ExperimentConfig::from_json(
            r#"{"name":"t","matrix_class":{"kind":"expdecay","gamma":0.5,"c":1.0},
                "sizes":[8],"seeds":[1],"factorizations":["cholesky"],"fit":"exponential"}"#,
        );
        assert!(matches!(err, Err(HarnessError::Config(_))));
    }

    #[test]
    fn unknown_fields_and_methods_fail() {
        assert!(ExperimentConfig::from_json(r#"{"name":"t","fit":"cubic"}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"name":"t","fit":"polynomial","sizez":[8]}"#).is_err());
        assert!(ExperimentConfig::from_json(
            r#"{"name":"t","matrix_class":{"kind":"banded","bandwidth":1},"sizes":[4],"seeds":[1],"factorizations":["svd"],"fit":"exponential"}"#
        )
        .is_err());
    }
}
