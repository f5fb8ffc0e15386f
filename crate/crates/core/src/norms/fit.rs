// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

//! Log-linear least-squares fits of decay profiles.

use serde::{Deserialize, Serialize};

use super::DecayProfile;
use crate::error::{Error, Result};

pub const MIN_FIT_POINTS: usize = 8;

/// Inclusive offset range used by a fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitWindow {
    pub lo: usize,
    pub hi: usize,
}

impl FitWindow {
    /// `[2, n/2]` for a section of half-width `n`.
    pub fn default_for(n: usize) -> Self {
        FitWindow { lo: 2, hi: n / 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DecayModel {
    Polynomial { s_hat: f64 },
    Exponential { gamma_hat: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub model: DecayModel,
    pub c_hat: f64,
    pub r_squared: f64,
    pub fit_window: FitWindow,
}

impl DecayFit {
    /// Fitted exponent or rate, whichever the model carries.
    pub fn rate(&self) -> f64 {
        match self.model {
            DecayModel::Polynomial { s_hat } => s_hat,
            DecayModel::Exponential { gamma_hat } => gamma_hat,
        }
    }

    pub fn record(&self) -> FitRecord {
        let (model, s_hat, gamma_hat) = match self.model {
            DecayModel::Polynomial { s_hat } => ("polynomial", Some(s_hat), None),
            DecayModel::Exponential { gamma_hat } => ("exponential", None, Some(gamma_hat)),
        };
        FitRecord { model: model.to_string(), s_hat, gamma_hat, c_hat: self.c_hat, r2: self.r_squared }
    }
}

/// Flat JSON record `{"model", "s_hat" | "gamma_hat", "c_hat", "r2"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_hat: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_hat: Option<f64>,
    pub c_hat: f64,
    pub r2: f64,
}

struct Line {
    slope: f64,
    intercept: f64,
    r_squared: f64,
}

fn least_squares(x: &[f64], y: &[f64]) -> Line {
    let k = x.len() as f64;
    let mx = x.iter().sum::<f64>() / k;
    let my = y.iter().sum::<f64>() / k;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) } else { 1.0 };
    Line { slope, intercept, r_squared }
}

fn points(p: &DecayProfile, window: FitWindow, x_of: impl Fn(usize) -> f64) -> Result<(Vec<f64>, Vec<f64>, FitWindow)> {
    let hi = window.hi.min(p.len().saturating_sub(1));
    let win = FitWindow { lo: window.lo, hi };
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for m in window.lo..=hi {
        let d = p.values.get(m).copied().unwrap_or(0.0);
        if d > 0.0 {
            xs.push(x_of(m));
            ys.push(d.ln());
        }
    }
    if xs.len() < MIN_FIT_POINTS {
        return Err(Error::TooFewPoints { needed: MIN_FIT_POINTS, found: xs.len() });
    }
    Ok((xs, ys, win))
}

/// Regresses `ln d[m]` on `ln(1 + m)`; zero entries are skipped.
pub fn fit_polynomial(p: &DecayProfile, window: FitWindow) -> Result<DecayFit> {
    let (x, y, fit_window) = points(p, window, |m| (m as f64).ln_1p())?;
    let l = least_squares(&x, &y);
    Ok(DecayFit {
        model: DecayModel::Polynomial { s_hat: -l.slope },
        c_hat: l.intercept.exp(),
        r_squared: l.r_squared,
        fit_window,
    })
}

/// Regresses `ln d[m]` on `m`; `gamma_hat = exp(slope)`.
pub fn fit_exponential(p: &DecayProfile, window: FitWindow) -> Result<DecayFit> {
    let (x, y, fit_window) = points(p, window, |m| m as f64)?;
    let l = least_squares(&x, &y);
    Ok(DecayFit {
        model: DecayModel::Exponential { gamma_hat: l.slope.exp() },
        c_hat: l.intercept.exp(),
        r_squared: l.r_squared,
        fit_window,
    })
}
