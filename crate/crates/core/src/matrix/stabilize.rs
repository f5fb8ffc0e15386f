// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

use super::SectionMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilizeOptions {
    /// Half-width `w` of the central probe window.
    pub probe: usize,
    pub tol: f64,
    pub n0: usize,
    pub n_max: usize,
}

impl StabilizeOptions {
    pub fn new(probe: usize, tol: f64) -> Self {
        StabilizeOptions { probe, tol, n0: 16, n_max: 1024 }
    }
}

#[derive(Debug, Clone)]
pub struct Stabilized {
    pub section: SectionMatrix,
    /// max-entry change of the probe window at the last doubling
    pub change: f64,
    pub doublings: usize,
}

/// Doubles `n` from `n0` until the central `(2w+1)^2` entries of `family(n)`
/// move by less than `tol` between consecutive sizes.
pub fn stabilized_section(
    mut family: impl FnMut(usize) -> Result<SectionMatrix>,
    opts: StabilizeOptions,
) -> Result<Stabilized> {
    if opts.probe > opts.n0 || opts.n0 == 0 {
        return Err(Error::InvalidParameter(format!(
            "probe half-width {} must not exceed n0 = {}",
            opts.probe, opts.n0
        )));
    }
    let center = |s: &SectionMatrix| s.interior(s.n() - opts.probe);
    let mut n = opts.n0;
    let mut prev = family(n)?;
    let mut change = f64::INFINITY;
    let mut doublings = 0;
    while 2 * n <= opts.n_max {
        n *= 2;
        let next = family(n)?;
        if next.n() != n {
            return Err(Error::DimensionMismatch { expected: 2 * n + 1, found: next.dim() });
        }
        change = center(&next)?.max_abs_diff(center(&prev)?.as_dense())?;
        doublings += 1;
        prev = next;
        if change < opts.tol {
            return Ok(Stabilized { section: prev, change, doublings });
        }
    }
    Err(Error::NotStabilized { n_max: opts.n_max, change })
}
