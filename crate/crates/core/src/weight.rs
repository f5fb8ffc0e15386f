// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

//! Weights on the integers and sampled checks of their admissibility.
//!
//! The standard family is `v(k) = exp(a |k|^b) (1 + |k|)^s`. Tabulated
//! weights carry explicit values on a symmetric window and are never
//! extrapolated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default GRS tolerance: the largest-n estimate must stay below `1 + tol`.
pub const DEFAULT_GRS_TOL: f64 = 0.02;

/// A weight function on the integers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Weight {
    Standard { a: f64, b: f64, s: f64 },
    /// `values[i]` is `v(i - w)` where `values.len() == 2w + 1`.
    Tabulated { values: Vec<f64> },
}

impl Weight {
    /// The constant weight `v = 1`.
    pub fn unit() -> Self {
        Weight::Standard { a: 0.0, b: 0.0, s: 0.0 }
    }

    /// Polynomial weight `(1 + |k|)^s`.
    pub fn polynomial(s: f64) -> Self {
        Weight::Standard { a: 0.0, b: 0.0, s }
    }

    /// Subexponential (or, for `b = 1`, exponential) weight.
    pub fn standard(a: f64, b: f64, s: f64) -> Result<Self> {
        if !(a >= 0.0 && (0.0..=1.0).contains(&b) && s >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "standard weight needs a >= 0, 0 <= b <= 1, s >= 0 (got a={a}, b={b}, s={s})"
            )));
        }
        Ok(Weight::Standard { a, b, s })
    }

    pub fn tabulated(values: Vec<f64>) -> Result<Self> {
        if values.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(
                "tabulated weight needs an odd number of values centred at 0".into(),
            ));
        }
        if values.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParameter("tabulated weight values must be positive".into()));
        }
        Ok(Weight::Tabulated { values })
    }

    /// Largest |k| at which the weight can be evaluated, `None` if unbounded.
    pub fn window(&self) -> Option<usize> {
        match self {
            Weight::Standard { .. } => None,
            Weight::Tabulated { values } => Some(values.len() / 2),
        }
    }

    /// `ln v(k)`; used where `v` itself would overflow.
    pub fn ln_eval(&self, k: i64) -> Result<f64> {
        match self {
            Weight::Standard { a, b, s } => {
                if k == 0 {
                    return Ok(0.0);
                }
                let d = k.unsigned_abs() as f64;
                Ok(a * d.powf(*b) + s * d.ln_1p())
            }
            Weight::Tabulated { .. } => self.eval(k).map(f64::ln),
        }
    }

    /// `v(k)`.
    pub fn eval(&self, k: i64) -> Result<f64> {
        match self {
            Weight::Standard { a, s, .. } if *a == 0.0 => Ok((1.0 + k.unsigned_abs() as f64).powf(*s)),
            Weight::Standard { .. } => self.ln_eval(k).map(f64::exp),
            Weight::Tabulated { values } => {
                let w = values.len() / 2;
                if k.unsigned_abs() as usize > w {
                    return Err(Error::IndexOutOfWindow { index: k, half_width: w });
                }
                Ok(values[(k + w as i64) as usize])
            }
        }
    }

    /// Values `v(-m), ..., v(m)` as a vector indexed by `k + m`.
    pub fn table(&self, m: usize) -> Result<Vec<f64>> {
        let m = m as i64;
        (-m..=m).map(|k| self.eval(k)).collect()
    }
}

/// Free-function form of [`Weight::eval`].
pub fn eval_weight(w: &Weight, k: i64) -> Result<f64> {
    w.eval(k)
}

/// One sampled GRS estimate `v(nk)^(1/n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrsEstimate {
    pub k: i64,
    pub n: u64,
    pub value: f64,
}

/// `v(nk)^(1/n)`, computed in log space.
pub fn grs_estimate(w: &Weight, k: i64, n: u64) -> Result<f64> {
    let nk = k
        .checked_mul(n as i64)
        .ok_or_else(|| Error::InvalidParameter(format!("n*k overflows for k={k}, n={n}")))?;
    Ok((w.ln_eval(nk)? / n as f64).exp())
}

/// The default sampling grid `n = 2^4, ..., 2^20` at `k = 1`.
pub fn default_grs_samples() -> Vec<(i64, u64)> {
    (4..=20).map(|p| (1, 1u64 << p)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightCheckReport {
    pub even_ok: bool,
    pub normalized_ok: bool,
    pub submultiplicative_ok: bool,
    /// max over the window of `v(j+k) / (v(j) v(k))`
    pub max_submultiplicative_ratio: f64,
    pub grs_estimates: Vec<GrsEstimate>,
    /// For every sampled `k`, the estimate at the largest sampled `n` is below `1 + tol`.
    pub grs_plausible: bool,
    pub subconvolutive_constant: Option<f64>,
}

impl WeightCheckReport {
    pub fn admissible(&self) -> bool {
        self.even_ok && self.normalized_ok && self.submultiplicative_ok && self.grs_plausible
    }
}

/// Checks evenness, normalization and submultiplicativity on `|j|, |k| <= window`
/// and evaluates the requested GRS samples.
///
/// Pairs whose sum falls outside a tabulated weight's window are skipped, as
/// are GRS samples that cannot be evaluated; failures are carried in the report.
pub fn check_admissible(
    w: &Weight,
    window: usize,
    grs_samples: &[(i64, u64)],
    tol: f64,
) -> Result<WeightCheckReport> {
    if window < 2 {
        return Err(Error::InvalidParameter("admissibility window must be >= 2".into()));
    }
    let win = match w.window() {
        Some(t) => window.min(t),
        None => window,
    } as i64;

    let mut even_ok = true;
    for k in 0..=win {
        if w.eval(k)? != w.eval(-k)? {
            even_ok = false;
        }
    }
    let normalized_ok = w.eval(0)? == 1.0;

    let mut max_ratio: f64 = 0.0;
    for j in -win..=win {
        for k in -win..=win {
            let Ok(num) = w.ln_eval(j + k) else { continue };
            let ratio = (num - w.ln_eval(j)? - w.ln_eval(k)?).exp();
            max_ratio = max_ratio.max(ratio);
        }
    }
    let submultiplicative_ok = max_ratio <= 1.0 + tol;

    let mut grs_estimates = Vec::with_capacity(grs_samples.len());
    for &(k, n) in grs_samples {
        if let Ok(value) = grs_estimate(w, k, n) {
            grs_estimates.push(GrsEstimate { k, n, value });
        }
    }
    let mut grs_plausible = !grs_estimates.is_empty();
    let mut ks: Vec<i64> = grs_estimates.iter().map(|e| e.k).collect();
    ks.sort_unstable();
    ks.dedup();
    for k in ks {
        let last = grs_estimates
            .iter()
            .filter(|e| e.k == k)
            .max_by_key(|e| e.n)
            .expect("k taken from estimates");
        if last.k != 0 && last.value >= 1.0 + tol {
            grs_plausible = false;
        }
    }

    let subconvolutive_constant = subconvolutive_constant(w, window).ok();

    Ok(WeightCheckReport {
        even_ok,
        normalized_ok,
        submultiplicative_ok,
        max_submultiplicative_ratio: max_ratio,
        grs_estimates,
        grs_plausible,
        subconvolutive_constant,
    })
}

/// Empirical constant `C` in `v^-1 * v^-1 <= C v^-1` on `|k|, |j| <= window`.
pub fn subconvolutive_constant(w: &Weight, window: usize) -> Result<f64> {
    let m = window as i64;
    let inv: Vec<f64> = w.table(2 * window)?.into_iter().map(|v| 1.0 / v).collect();
    let at = |k: i64| inv[(k + 2 * m) as usize];
    let mut best: f64 = 0.0;
    for k in -m..=m {
        let conv: f64 = (-m..=m).map(|j| at(j) * at(k - j)).sum();
        best = best.max(conv / at(k));
    }
    Ok(best)
}
