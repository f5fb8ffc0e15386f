// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{SectionMatrix, SymbolSeries, C64, ZERO};
use crate::error::{Error, Result};

/// Uniform magnitude in `[0.5, 1]` with a random sign.
fn signed_unit(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.gen_range(0.5..=1.0);
    if rng.gen::<bool>() {
        u
    } else {
        -u
    }
}

fn enveloped(n: usize, seed: u64, envelope: impl Fn(u64) -> f64) -> SectionMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SectionMatrix::from_fn(n, |j, k| {
        let u = signed_unit(&mut rng);
        C64::new(u * envelope(j.abs_diff(k)), 0.0)
    })
}

/// Random section with `|a_jk| <= c (1 + |j-k|)^-s`.
pub fn generate_jaffard(n: usize, s: f64, c: f64, seed: u64) -> Result<SectionMatrix> {
    if !(s > 1.0) || !(c > 0.0) {
        return Err(Error::InvalidParameter(format!("jaffard needs s > 1, c > 0 (s={s}, c={c})")));
    }
    Ok(enveloped(n, seed, |m| c * (1.0 + m as f64).powf(-s)).with_label(format!("jaffard(s={s})")))
}

/// Random section with `|a_jk| <= c gamma^|j-k|`.
pub fn generate_expdecay(n: usize, gamma: f64, c: f64, seed: u64) -> Result<SectionMatrix> {
    if !(gamma > 0.0 && gamma < 1.0) || !(c > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "expdecay needs 0 < gamma < 1, c > 0 (gamma={gamma}, c={c})"
        )));
    }
    Ok(enveloped(n, seed, |m| c * gamma.powi(m as i32)).with_label(format!("expdecay(gamma={gamma})")))
}

/// Random section supported exactly on `|j-k| <= bandwidth`.
pub fn generate_banded(n: usize, bandwidth: usize, seed: u64) -> Result<SectionMatrix> {
    if bandwidth > 2 * n {
        return Err(Error::InvalidParameter(format!(
            "bandwidth {bandwidth} exceeds 2n = {}",
            2 * n
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = SectionMatrix::from_fn(n, |j, k| {
        let u = signed_unit(&mut rng);
        if j.abs_diff(k) as usize <= bandwidth {
            C64::new(u, 0.0)
        } else {
            ZERO
        }
    });
    Ok(m.with_label(format!("banded(N={bandwidth})")))
}

/// The section of the Laurent matrix `a_jk = c_{j-k}`.
pub fn laurent_from_symbol(sym: &SymbolSeries, n: usize) -> Result<SectionMatrix> {
    let limit = 2 * n as i64;
    if let Some((lo, hi)) = sym.support() {
        for off in [lo, hi] {
            if off.abs() > limit {
                return Err(Error::SupportTooWide { offset: off, limit });
            }
        }
    }
    Ok(SectionMatrix::from_fn(n, |j, k| sym.coeff(j - k)).with_label("laurent"))
}
