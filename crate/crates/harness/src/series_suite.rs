// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

use locfact_core::factor::{cholesky, lu_unpivoted, HERMITIAN_TOL};
use locfact_core::matrix::opnorm_estimate;
use locfact_core::series::{
    align_with_unit_diagonal, precondition_by_scaling, reference_factors, series_cholesky, series_lu_inverse,
    spd_rescale, SeriesTerms,
};
use locfact_core::{SectionMatrix, C64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, SeriesSettings};
use crate::report::{timestamp, CsvRow, Report, TrialError};
use crate::{run_in_pool, HarnessError};

const OPNORM_ITERS: usize = 2000;
const OPNORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsPoint {
    pub eps: f64,
    /// `||A' - I||_op` of the rescaled preconditioned section.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesTrial {
    pub size: usize,
    pub seed: u64,
    pub config_hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<TrialError>,
    /// Scale applied before summing; 1 for non-Hermitian inputs.
    pub alpha: f64,
    /// `||A - I||_op` of the summed input.
    pub contraction: f64,
    pub terms_used: usize,
    pub tail: f64,
    pub converged: bool,
    /// Every partial-sum term had exact zeros on the wrong side of the diagonal.
    pub terms_triangular: bool,
    /// `max|L_series - L_direct|` and `max|U_series - U_direct|` after alignment.
    pub lu_discrepancy: Option<f64>,
    pub cholesky_discrepancy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cholesky_error: Option<TrialError>,
    pub eps_scan: Vec<EpsPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_error: Option<TrialError>,
}

impl SeriesTrial {
    pub fn best_eps(&self) -> Option<EpsPoint> {
        self.eps_scan.iter().copied().min_by(|a, b| a.deviation.total_cmp(&b.deviation))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub generated_at: u64,
    pub series_trials: Vec<SeriesTrial>,
}

impl SeriesReport {
    pub fn failures(&self) -> usize {
        self.series_trials.iter().filter(|t| t.error.is_some() || t.cholesky_error.is_some()).count()
    }
}

impl Report for SeriesReport {
    fn rows(&self) -> Vec<CsvRow> {
        let mut rows = Vec::new();
        for t in &self.series_trials {
            let (n, s) = (Some(t.size), Some(t.seed));
            if let Some(e) = &t.error {
                rows.push(CsvRow::text(n, s, "series_lu", "error", e.kind.clone()));
                continue;
            }
            rows.push(CsvRow::num(n, s, "series_lu", "alpha", t.alpha));
            rows.push(CsvRow::num(n, s, "series_lu", "contraction", t.contraction));
            rows.push(CsvRow::num(n, s, "series_lu", "terms_used", t.terms_used as f64));
            rows.push(CsvRow::num(n, s, "series_lu", "tail", t.tail));
            rows.push(CsvRow::text(n, s, "series_lu", "terms_triangular", t.terms_triangular.to_string()));
            if let Some(d) = t.lu_discrepancy {
                rows.push(CsvRow::num(n, s, "series_lu", "discrepancy", d));
            }
            if let Some(d) = t.cholesky_discrepancy {
                rows.push(CsvRow::num(n, s, "series_cholesky", "discrepancy", d));
            }
            if let Some(e) = &t.cholesky_error {
                rows.push(CsvRow::text(n, s, "series_cholesky", "error", e.kind.clone()));
            }
            for p in &t.eps_scan {
                rows.push(CsvRow::num(n, s, "precondition", format!("deviation_eps_{}", p.eps), p.deviation));
            }
        }
        rows
    }
}

fn is_hermitian(a: &SectionMatrix) -> bool {
    a.hermitian_defect() <= HERMITIAN_TOL * a.max_abs()
}

/// Rescales Hermitian inputs, then shrinks `M = A - I` to the cap.
fn summable(a: &SectionMatrix, settings: &SeriesSettings) -> locfact_core::Result<(f64, SectionMatrix, f64)> {
    let (alpha, mut scaled) = if is_hermitian(a) { spd_rescale(a)? } else { (1.0, a.clone()) };
    let one = C64::new(1.0, 0.0);
    let mut contraction = opnorm_estimate(scaled.shift(-one).as_dense(), OPNORM_ITERS, OPNORM_TOL);
    if let Some(cap) = settings.contraction_cap {
        if contraction > cap {
            let m = scaled.shift(-one).scale(C64::new(cap / contraction, 0.0));
            scaled = m.shift(one);
            contraction = opnorm_estimate(m.as_dense(), OPNORM_ITERS, OPNORM_TOL);
        }
    }
    Ok((alpha, scaled, contraction))
}

fn terms_triangular(a: &SectionMatrix, count: usize) -> bool {
    SeriesTerms::new(a)
        .take(count)
        .all(|(t, s)| t.is_lower_triangular() && s.is_upper_triangular() && s.diag().iter().all(|x| x.norm() == 0.0))
}

fn trial(cfg: &ExperimentConfig, settings: &SeriesSettings, hash: &str, size: usize, seed: u64) -> SeriesTrial {
    let mut out = SeriesTrial {
        size,
        seed,
        config_hash: hash.to_string(),
        error: None,
        alpha: 1.0,
        contraction: f64::NAN,
        terms_used: 0,
        tail: f64::NAN,
        converged: false,
        terms_triangular: false,
        lu_discrepancy: None,
        cholesky_discrepancy: None,
        cholesky_error: None,
        eps_scan: Vec::new(),
        eps_error: None,
    };
    let tol = &cfg.tolerances;
    let a = match cfg.input(size, seed) {
        Ok(a) => a,
        Err(e) => {
            out.error = Some(e.into());
            return out;
        }
    };
    let main = (|| -> locfact_core::Result<()> {
        let (alpha, scaled, contraction) = summable(&a, settings)?;
        out.alpha = alpha;
        out.contraction = contraction;
        let sr = series_lu_inverse(&scaled, tol.series, tol.max_terms)?;
        out.terms_used = sr.terms_used;
        out.tail = sr.tail_estimate;
        out.converged = sr.converged;
        out.terms_triangular = sr.l_inv.is_lower_triangular()
            && sr.u_inv.is_upper_triangular()
            && terms_triangular(&scaled, sr.terms_used);
        let (l, u) = align_with_unit_diagonal(&sr)?;
        let (ld, ud) = lu_unpivoted(&scaled, tol.pivot)?.factors;
        out.lu_discrepancy = Some(l.max_abs_diff(ld.as_dense())?.max(u.max_abs_diff(ud.as_dense())?));
        Ok(())
    })();
    if let Err(e) = main {
        out.error = Some(e.into());
        return out;
    }
    if is_hermitian(&a) {
        let chol = series_cholesky(&a, tol.series, tol.max_terms)
            .and_then(|s| s.factors.0.max_abs_diff(cholesky(&a)?.factors.0.as_dense()));
        match chol {
            Ok(d) => out.cholesky_discrepancy = Some(d),
            Err(e) => out.cholesky_error = Some(e.into()),
        }
    }
    let scan = (|| -> locfact_core::Result<Vec<EpsPoint>> {
        let (l_ref, u_ref) = reference_factors(&a)?;
        settings
            .eps_grid
            .iter()
            .map(|&eps| {
                let ap = precondition_by_scaling(&a, &l_ref, &u_ref, eps)?;
                let deviation = opnorm_estimate(ap.shift(C64::new(-1.0, 0.0)).as_dense(), OPNORM_ITERS, OPNORM_TOL);
                Ok(EpsPoint { eps, deviation })
            })
            .collect()
    })();
    match scan {
        Ok(v) => out.eps_scan = v,
        Err(e) => out.eps_error = Some(e.into()),
    }
    out
}

pub fn run_series_validation(cfg: &ExperimentConfig, jobs: Option<usize>) -> Result<SeriesReport, HarnessError> {
    cfg.validate()?;
    let settings = cfg.series.clone().unwrap_or_default();
    let hash = cfg.hash();
    let trials: Vec<(usize, u64)> =
        cfg.sizes.iter().flat_map(|&n| cfg.seeds.iter().map(move |&s| (n, s))).collect();
    let mut series_trials: Vec<SeriesTrial> =
        run_in_pool(jobs, || trials.par_iter().map(|&(n, s)| trial(cfg, &settings, &hash, n, s)).collect())?;
    series_trials.sort_by_key(|t| (t.size, t.seed));
    Ok(SeriesReport { config: cfg.clone(), config_hash: hash, generated_at: timestamp(), series_trials })
}
