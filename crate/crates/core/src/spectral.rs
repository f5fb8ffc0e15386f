// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

//! Spectral factorization `sigma = sigma_L sigma_U` of positive scalar
//! Laurent symbols through the cepstrum.
//!
//! On a grid of `N` points, `ln sigma` is expanded in Fourier coefficients
//! `c_m`; `sigma_L = exp(c_0 / 2 + sum_{0 < m < N/2} c_m z^m)` is the
//! trapezoidal realization of the Herglotz integral, and
//! `sigma_U = sigma / sigma_L`. The constant is split evenly, so
//! `sigma_L(0) = exp(c_0 / 2) > 0`.

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::cholesky;
use crate::matrix::{laurent_from_symbol, SymbolSeries, C64, ZERO};
use crate::norms::{fit_exponential, DecayProfile, FitWindow};

/// Relative floor below which retained factor coefficients are dropped.
pub const COEFF_PRUNE: f64 = 1e-16;
/// Relative floor for coefficients entering the decay fit.
pub const FIT_FLOOR: f64 = 1e-12;
/// Imaginary parts above this fraction of `max |sigma|` fail the check.
pub const IMAG_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaleyWienerReport {
    pub pass: bool,
    pub min_sample: f64,
    pub max_sample: f64,
    pub max_imag: f64,
    pub floor: f64,
    /// Trapezoidal estimate of `(1/2pi) int ln sigma`, when all samples are positive.
    pub log_integral: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SpectralFactorization {
    pub sigma_l: SymbolSeries,
    pub sigma_u: SymbolSeries,
    pub grid_size: usize,
    /// `max_t |sigma_L sigma_U - sigma|` with the retained coefficients.
    pub reconstruction_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoSource {
    /// Coefficients of `sigma_L`.
    Factor,
    /// Coefficients of `1 / sigma_L`, used when `sigma_L` has too few
    /// coefficients above the floor (trigonometric polynomial symbols).
    InverseFactor,
}

/// JSON record of a factorization run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralRecord {
    pub recon_err: f64,
    pub rho_hat: Option<f64>,
    pub rho_source: Option<RhoSource>,
    pub grid: usize,
}

fn check_grid(grid_size: usize) -> Result<()> {
    if grid_size < 64 || !grid_size.is_power_of_two() {
        return Err(Error::InvalidParameter(format!("grid size must be a power of two >= 64, got {grid_size}")));
    }
    Ok(())
}

struct Grid {
    n: usize,
    planner: FftPlanner<f64>,
}

impl Grid {
    fn new(n: usize) -> Self {
        Grid { n, planner: FftPlanner::new() }
    }

    /// `sum_m c_m e^{i m t_k}` for `t_k = 2 pi k / N`; coefficients wrap mod `N`.
    fn samples(&mut self, sym: &SymbolSeries) -> Result<Vec<C64>> {
        let half = (self.n / 2) as i64;
        let mut buf = vec![ZERO; self.n];
        for (m, c) in sym.iter() {
            if m.abs() >= half {
                return Err(Error::SupportTooWide { offset: m, limit: half - 1 });
            }
            buf[m.rem_euclid(self.n as i64) as usize] += c;
        }
        self.planner.plan_fft_inverse(self.n).process(&mut buf);
        Ok(buf)
    }

    /// Fourier coefficients of grid samples, index `m mod N`.
    fn coefficients(&mut self, mut vals: Vec<C64>) -> Vec<C64> {
        self.planner.plan_fft_forward(self.n).process(&mut vals);
        let scale = 1.0 / self.n as f64;
        vals.iter_mut().for_each(|v| *v *= scale);
        vals
    }

    fn eval_from_coeffs(&mut self, mut coeffs: Vec<C64>) -> Vec<C64> {
        self.planner.plan_fft_inverse(self.n).process(&mut coeffs);
        coeffs
    }
}

pub fn paley_wiener_check(sym: &SymbolSeries, grid_size: usize, floor: Option<f64>) -> Result<PaleyWienerReport> {
    check_grid(grid_size)?;
    let samples = Grid::new(grid_size).samples(sym)?;
    let max_abs = samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let max_sample = samples.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let min_sample = samples.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let max_imag = samples.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let floor = floor.unwrap_or(1e-8 * max_abs);
    let real = max_imag <= IMAG_TOL * max_abs;
    let pass = max_abs > 0.0 && real && min_sample >= floor && min_sample > 0.0;
    let log_integral = (min_sample > 0.0)
        .then(|| samples.iter().map(|z| z.re.ln()).sum::<f64>() / grid_size as f64);
    Ok(PaleyWienerReport { pass, min_sample, max_sample, max_imag, floor, log_integral })
}

fn series_from_wrapped(coeffs: &[C64], keep: impl Fn(i64) -> bool, prune: f64) -> SymbolSeries {
    let n = coeffs.len() as i64;
    SymbolSeries::from_pairs(
        coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let i = i as i64;
                (if i < n / 2 { i } else { i - n }, c)
            })
            .filter(|&(m, c)| keep(m) && c.norm() > prune),
    )
}

fn wrap(sym: &SymbolSeries, n: usize) -> Vec<C64> {
    let mut buf = vec![ZERO; n];
    for (m, c) in sym.iter() {
        buf[m.rem_euclid(n as i64) as usize] += c;
    }
    buf
}

pub fn spectral_factor(sym: &SymbolSeries, grid_size: usize) -> Result<SpectralFactorization> {
    let pw = paley_wiener_check(sym, grid_size, None)?;
    if !pw.pass {
        return Err(Error::PreconditionViolated { what: "symbol real and above the positivity floor", value: pw.min_sample });
    }
    let n = grid_size;
    let mut grid = Grid::new(n);
    let sigma = grid.samples(sym)?;
    let log: Vec<C64> = sigma.iter().map(|z| C64::new(z.re.ln(), 0.0)).collect();
    let cep = grid.coefficients(log);

    let mut causal = vec![ZERO; n];
    causal[0] = cep[0] * 0.5;
    causal[1..n / 2].copy_from_slice(&cep[1..n / 2]);
    let l_vals: Vec<C64> = grid.eval_from_coeffs(causal).into_iter().map(|z| z.exp()).collect();
    let u_vals: Vec<C64> = sigma.iter().zip(&l_vals).map(|(s, l)| C64::new(s.re, 0.0) / l).collect();

    let l_coeffs = grid.coefficients(l_vals);
    let u_coeffs = grid.coefficients(u_vals);
    let scale = l_coeffs[0].norm();
    let mut sigma_l = series_from_wrapped(&l_coeffs, |m| m >= 0, COEFF_PRUNE * scale);
    let sigma_u = series_from_wrapped(&u_coeffs, |m| m <= 0, COEFF_PRUNE * scale);

    // c_0 is real, so exp(c_0 / 2) is real positive up to rounding in the transforms
    let lead = sigma_l.coeff(0);
    sigma_l = SymbolSeries::from_pairs(sigma_l.iter().map(|(m, c)| (m, if m == 0 { C64::new(lead.re, 0.0) } else { c })));
    debug_assert!(lead.re > 0.0);

    let l_back = grid.eval_from_coeffs(wrap(&sigma_l, n));
    let u_back = grid.eval_from_coeffs(wrap(&sigma_u, n));
    let reconstruction_error = l_back
        .iter()
        .zip(&u_back)
        .zip(&sigma)
        .map(|((l, u), s)| (l * u - s).norm())
        .fold(0.0, f64::max);

    Ok(SpectralFactorization { sigma_l, sigma_u, grid_size, reconstruction_error })
}

/// Magnitudes of the coefficients of `1 / sigma_L` at offsets `0..N/2`.
pub fn inverse_factor_coefficients(f: &SpectralFactorization) -> Result<Vec<f64>> {
    let n = f.grid_size;
    let mut grid = Grid::new(n);
    let vals: Vec<C64> = grid.samples(&f.sigma_l)?.into_iter().map(|z| z.inv()).collect();
    let c = grid.coefficients(vals);
    Ok(c[..n / 2].iter().map(|z| z.norm()).collect())
}

fn fit_ratio(mags: &[f64]) -> Option<f64> {
    let top = mags.iter().copied().fold(0.0, f64::max);
    let cut = mags.iter().position(|&x| x <= FIT_FLOOR * top).unwrap_or(mags.len());
    if cut <= 1 {
        return None;
    }
    let profile = DecayProfile::from_sequence(mags[..cut].to_vec());
    fit_exponential(&profile, FitWindow { lo: 1, hi: cut - 1 }).ok().map(|f| f.rate())
}

/// Fitted ratio `rho` in `|coefficient m| <= C rho^m`.
pub fn decay_ratio(f: &SpectralFactorization) -> Result<Option<(f64, RhoSource)>> {
    let mags: Vec<f64> = (0..f.grid_size as i64 / 2).map(|m| f.sigma_l.coeff(m).norm()).collect();
    if let Some(r) = fit_ratio(&mags) {
        return Ok(Some((r, RhoSource::Factor)));
    }
    Ok(fit_ratio(&inverse_factor_coefficients(f)?).map(|r| (r, RhoSource::InverseFactor)))
}

impl SpectralFactorization {
    pub fn record(&self) -> Result<SpectralRecord> {
        let rho = decay_ratio(self)?;
        Ok(SpectralRecord {
            recon_err: self.reconstruction_error,
            rho_hat: rho.map(|r| r.0),
            rho_source: rho.map(|r| r.1),
            grid: self.grid_size,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CholeskyComparison {
    pub max_discrepancy: f64,
    pub rows_compared: usize,
    pub offsets_compared: usize,
}

/// Compares rows `|j| <= n/2` of the Cholesky factor of the Laurent section
/// with the coefficients of `sigma_L`: `C(j, j - m)` against `sigma_L[m]`
/// for `0 <= m <= n/2`.
pub fn factor_vs_section_cholesky(sym: &SymbolSeries, n: usize, grid_size: usize) -> Result<CholeskyComparison> {
    let f = spectral_factor(sym, grid_size)?;
    let a = laurent_from_symbol(sym, n)?;
    let c = cholesky(&a)?.factors.0;
    let half = (n / 2) as i64;
    let mut worst: f64 = 0.0;
    for j in -half..=half {
        for m in 0..=half {
            let entry = c.at(j, j - m)?;
            worst = worst.max((entry - f.sigma_l.coeff(m)).norm());
        }
    }
    Ok(CholeskyComparison {
        max_discrepancy: worst,
        rows_compared: (2 * half + 1) as usize,
        offsets_compared: (half + 1) as usize,
    })
}
