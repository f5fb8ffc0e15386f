// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

//! Versioned inheritance baselines: empirical thresholds plus the medians of
//! a reference run, which a rerun with the same config must reproduce.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{FitKind, Method};
use crate::inheritance::InheritanceReport;
use crate::HarnessError;

pub const BASELINE_VERSION: u32 = 1;

/// Factor objects whose medians are held to the thresholds. Polar factors
/// are recorded but not gated.
pub const GATED_OBJECTS: [&str; 9] = ["L", "U", "L_inv", "U_inv", "C", "C_inv", "Q", "R", "R_inv"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Minimum median fitted exponent for polynomial fits.
    pub polynomial_min: f64,
    /// Maximum median fitted ratio for exponential fits.
    pub exponential_max: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { polynomial_min: 1.5, exponential_max: 0.8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Baseline {
    pub version: u32,
    pub config_name: String,
    pub config_hash: String,
    pub fit: FitKind,
    pub thresholds: Thresholds,
    pub gated_objects: Vec<String>,
    /// Median rate per `n{size}/{factor}/{object}`.
    pub medians: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub key: String,
    pub median: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub key: String,
    pub baseline: Option<f64>,
    pub observed: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineCheck {
    pub hash_match: bool,
    pub violations: Vec<Violation>,
    /// Medians that differ from the baseline. Only filled when the hashes match.
    pub mismatches: Vec<Mismatch>,
}

impl BaselineCheck {
    pub fn thresholds_met(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn reproduced(&self) -> bool {
        self.hash_match && self.mismatches.is_empty()
    }

    /// Threshold violations always fail; mismatched medians fail only for the baseline's own config.
    pub fn passed(&self) -> bool {
        self.thresholds_met() && (!self.hash_match || self.mismatches.is_empty())
    }
}

fn gated(object: &str, gated_objects: &[String]) -> bool {
    gated_objects.iter().any(|g| g == object)
}

fn violates(fit: FitKind, t: &Thresholds, median: f64) -> Option<f64> {
    match fit {
        FitKind::Polynomial => (!(median >= t.polynomial_min)).then_some(t.polynomial_min),
        FitKind::Exponential => (!(median <= t.exponential_max)).then_some(t.exponential_max),
    }
}

impl Baseline {
    pub fn from_report(report: &InheritanceReport, thresholds: Thresholds) -> Self {
        Baseline {
            version: BASELINE_VERSION,
            config_name: report.config.name.clone(),
            config_hash: report.config_hash.clone(),
            fit: report.config.fit,
            thresholds,
            gated_objects: GATED_OBJECTS.iter().map(|s| s.to_string()).collect(),
            medians: report.summary.iter().map(|e| (e.key(), e.median_rate)).collect(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let b: Baseline = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        if b.version != BASELINE_VERSION {
            return Err(HarnessError::Config(format!(
                "baseline version {} is not supported (expected {BASELINE_VERSION})",
                b.version
            )));
        }
        Ok(b)
    }

    pub fn save(&self, path: &Path) -> Result<(), HarnessError> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    /// Applies the thresholds to the report's gated medians and compares
    /// every median with the stored one.
    pub fn check(&self, report: &InheritanceReport) -> BaselineCheck {
        let hash_match = report.config_hash == self.config_hash;
        let observed: BTreeMap<String, f64> = report.summary.iter().map(|e| (e.key(), e.median_rate)).collect();
        let violations = report
            .summary
            .iter()
            .filter(|e| gated(&e.object, &self.gated_objects))
            .filter_map(|e| {
                violates(report.config.fit, &self.thresholds, e.median_rate).map(|threshold| Violation {
                    key: e.key(),
                    median: e.median_rate,
                    threshold,
                })
            })
            .collect();
        let mut mismatches = Vec::new();
        if hash_match {
            let keys: std::collections::BTreeSet<&String> = self.medians.keys().chain(observed.keys()).collect();
            for key in keys {
                let (b, o) = (self.medians.get(key).copied(), observed.get(key).copied());
                // bitwise comparison: the run is deterministic
                if b.map(f64::to_bits) != o.map(f64::to_bits) {
                    mismatches.push(Mismatch { key: key.clone(), baseline: b, observed: o });
                }
            }
        }
        BaselineCheck { hash_match, violations, mismatches }
    }
}

/// Gated medians of one method, for summaries.
pub fn gated_medians(report: &InheritanceReport, method: Method) -> Vec<(String, f64)> {
    report
        .summary
        .iter()
        .filter(|e| e.factor == method && GATED_OBJECTS.contains(&e.object.as_str()))
        .map(|e| (e.key(), e.median_rate))
        .collect()
}
