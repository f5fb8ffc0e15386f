// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

use locfact_core::funcs::{default_contour, expm, riesz_dunford_named, sqrtm_hpd, Contour, ScalarFunction};
use locfact_core::matrix::opnorm_estimate;
use locfact_core::{SectionMatrix, C64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ContourChoice, ExperimentConfig, FuncalcSettings};
use crate::report::{timestamp, CsvRow, Report, TrialError};
use crate::{run_in_pool, HarnessError};

const OPNORM_ITERS: usize = 2000;
const OPNORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionCheck {
    pub function: ScalarFunction,
    /// `max|f(A)_contour - f(A)_direct|`
    pub discrepancy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<TrialError>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuncalcTrial {
    pub size: usize,
    pub seed: u64,
    pub config_hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<TrialError>,
    /// Factor applied to the generated input.
    pub scale: f64,
    pub contour: Option<Contour>,
    pub functions: Vec<FunctionCheck>,
    /// `max|expm(A) expm(-A) - I|`
    pub expm_inverse_defect: Option<f64>,
    /// Change of the contour exponential when the node count doubles.
    pub node_doubling_change: Option<f64>,
    /// `max|sqrtm(A)^2 - A|`, for Hermitian positive definite inputs.
    pub sqrt_square_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sqrt_error: Option<TrialError>,
}

impl FuncalcTrial {
    pub fn check(&self, f: ScalarFunction) -> Option<&FunctionCheck> {
        self.functions.iter().find(|c| c.function == f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuncalcReport {
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub generated_at: u64,
    pub funcalc_trials: Vec<FuncalcTrial>,
}

impl FuncalcReport {
    pub fn failures(&self) -> usize {
        self.funcalc_trials
            .iter()
            .filter(|t| t.error.is_some() || t.sqrt_error.is_some() || t.functions.iter().any(|c| c.error.is_some()))
            .count()
    }
}

impl Report for FuncalcReport {
    fn rows(&self) -> Vec<CsvRow> {
        let mut rows = Vec::new();
        for t in &self.funcalc_trials {
            let (n, s) = (Some(t.size), Some(t.seed));
            if let Some(e) = &t.error {
                rows.push(CsvRow::text(n, s, "funcalc", "error", e.kind.clone()));
                continue;
            }
            rows.push(CsvRow::num(n, s, "funcalc", "scale", t.scale));
            for c in &t.functions {
                let name = c.function.name();
                match (&c.discrepancy, &c.error) {
                    (Some(d), _) => rows.push(CsvRow::num(n, s, name, "discrepancy", *d)),
                    (None, Some(e)) => rows.push(CsvRow::text(n, s, name, "error", e.kind.clone())),
                    (None, None) => {}
                }
            }
            if let Some(d) = t.expm_inverse_defect {
                rows.push(CsvRow::num(n, s, "expm", "inverse_defect", d));
            }
            if let Some(d) = t.node_doubling_change {
                rows.push(CsvRow::num(n, s, "exp", "node_doubling_change", d));
            }
            if let Some(d) = t.sqrt_square_residual {
                rows.push(CsvRow::num(n, s, "sqrtm", "square_residual", d));
            }
            if let Some(e) = &t.sqrt_error {
                rows.push(CsvRow::text(n, s, "sqrtm", "error", e.kind.clone()));
            }
        }
        rows
    }
}

fn direct(a: &SectionMatrix, f: ScalarFunction, cfg: &ExperimentConfig) -> locfact_core::Result<SectionMatrix> {
    match f {
        ScalarFunction::One => Ok(SectionMatrix::identity(a.n())),
        ScalarFunction::Identity => Ok(a.clone()),
        ScalarFunction::Exp => Ok(expm(a)),
        ScalarFunction::Inverse => a.inverse(),
        ScalarFunction::SqrtPrincipal => sqrtm_hpd(a, cfg.tolerances.sqrt, cfg.tolerances.sqrt_iters),
    }
}

fn contour(a: &SectionMatrix, settings: &FuncalcSettings, points: usize) -> locfact_core::Result<Contour> {
    match settings.contour {
        ContourChoice::Default => default_contour(a, points),
        ContourChoice::OriginPlusOne => {
            let r = opnorm_estimate(a.as_dense(), OPNORM_ITERS, OPNORM_TOL) + 1.0;
            Contour::new(C64::new(0.0, 0.0), r, points)
        }
    }
}

fn trial(cfg: &ExperimentConfig, settings: &FuncalcSettings, hash: &str, size: usize, seed: u64) -> FuncalcTrial {
    let mut out = FuncalcTrial {
        size,
        seed,
        config_hash: hash.to_string(),
        error: None,
        scale: 1.0,
        contour: None,
        functions: Vec::new(),
        expm_inverse_defect: None,
        node_doubling_change: None,
        sqrt_square_residual: None,
        sqrt_error: None,
    };
    let prepared = cfg.input(size, seed).and_then(|a| {
        let norm = opnorm_estimate(a.as_dense(), OPNORM_ITERS, OPNORM_TOL);
        let scale = if norm > 0.0 { settings.target_norm / norm } else { 1.0 };
        let a = a.scale(C64::new(scale, 0.0));
        let c = contour(&a, settings, settings.nodes)?;
        Ok((a, scale, c))
    });
    let (a, scale, c) = match prepared {
        Ok(v) => v,
        Err(e) => {
            out.error = Some(e.into());
            return out;
        }
    };
    out.scale = scale;
    out.contour = Some(c);
    out.functions = settings
        .functions
        .iter()
        .map(|&f| {
            let d = riesz_dunford_named(&a, f, &c)
                .and_then(|b| b.max_abs_diff(direct(&a, f, cfg)?.as_dense()));
            match d {
                Ok(d) => FunctionCheck { function: f, discrepancy: Some(d), error: None },
                Err(e) => FunctionCheck { function: f, discrepancy: None, error: Some(e.into()) },
            }
        })
        .collect();
    let e = expm(&a);
    out.expm_inverse_defect = e
        .matmul(&expm(&a.scale(C64::new(-1.0, 0.0))))
        .and_then(|p| p.max_abs_diff(SectionMatrix::identity(a.n()).as_dense()))
        .ok();
    out.node_doubling_change = (|| -> locfact_core::Result<f64> {
        let coarse = riesz_dunford_named(&a, ScalarFunction::Exp, &c)?;
        let fine = riesz_dunford_named(&a, ScalarFunction::Exp, &contour(&a, settings, 2 * settings.nodes)?)?;
        coarse.max_abs_diff(fine.as_dense())
    })()
    .ok();
    if cfg.make_spd {
        let r = sqrtm_hpd(&a, cfg.tolerances.sqrt, cfg.tolerances.sqrt_iters)
            .and_then(|s| s.matmul(&s)?.max_abs_diff(a.as_dense()));
        match r {
            Ok(d) => out.sqrt_square_residual = Some(d),
            Err(e) => out.sqrt_error = Some(e.into()),
        }
    }
    out
}

pub fn run_funcalc(cfg: &ExperimentConfig, jobs: Option<usize>) -> Result<FuncalcReport, HarnessError> {
    cfg.validate()?;
    let settings = cfg.funcalc.clone().unwrap_or_default();
    let hash = cfg.hash();
    let trials: Vec<(usize, u64)> =
        cfg.sizes.iter().flat_map(|&n| cfg.seeds.iter().map(move |&s| (n, s))).collect();
    let mut funcalc_trials: Vec<FuncalcTrial> =
        run_in_pool(jobs, || trials.par_iter().map(|&(n, s)| trial(cfg, &settings, &hash, n, s)).collect())?;
    funcalc_trials.sort_by_key(|t| (t.size, t.seed));
    Ok(FuncalcReport { config: cfg.clone(), config_hash: hash, generated_at: timestamp(), funcalc_trials })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spd_config(funcalc: &str) -> ExperimentConfig {
        ExperimentConfig::from_json(&format!(
            r#"{{"name":"fc","matrix_class":{{"kind":"expdecay","gamma":0.5,"c":1.0}},"make_spd":true,
                "sizes":[8],"seeds":[1],"fit":"exponential","funcalc":{funcalc}}}"#
        ))
        .unwrap()
    }

    #[test]
    fn origin_contour_checks() {
        let r = run_funcalc(&spd_config(r#"{"functions":["one","identity","exp"]}"#), None).unwrap();
        let t = &r.funcalc_trials[0];
        assert_eq!(r.failures(), 0, "{t:?}");
        assert!(t.check(ScalarFunction::One).unwrap().discrepancy.unwrap() < 1e-10);
        assert!(t.check(ScalarFunction::Identity).unwrap().discrepancy.unwrap() < 1e-10);
        assert!(t.check(ScalarFunction::Exp).unwrap().discrepancy.unwrap() < 1e-8);
        assert!(t.node_doubling_change.unwrap() < 1e-8);
        assert!(t.expm_inverse_defect.unwrap() < 1e-10);
        assert!(t.sqrt_square_residual.unwrap() < 1e-9);
    }

    #[test]
    fn sqrt_on_default_contour_improves_with_nodes() {
        let err = |nodes: usize| {
            let cfg = spd_config(&format!(r#"{{"functions":["sqrt_principal"],"contour":"default","nodes":{nodes}}}"#));
            let r = run_funcalc(&cfg, None).unwrap();
            r.funcalc_trials[0].check(ScalarFunction::SqrtPrincipal).unwrap().discrepancy.unwrap()
        };
        let (coarse, fine) = (err(64), err(256));
        assert!(fine < coarse && fine < 1e-3, "{coarse} {fine}");
    }

    #[test]
    fn zero_matrix_uses_unit_scale() {
        let cfg = ExperimentConfig::from_json(
            r#"{"name":"z","matrix_class":{"kind":"laurent","symbol":{"offsets":[0],"re":[0.0]}},
                "sizes":[3],"seeds":[1],"fit":"exponential","funcalc":{}}"#,
        )
        .unwrap();
        let r = run_funcalc(&cfg, None).unwrap();
        let t = &r.funcalc_trials[0];
        assert_eq!(t.scale, 1.0);
        assert!(t.check(ScalarFunction::Exp).unwrap().discrepancy.unwrap() < 1e-12);
    }
}
