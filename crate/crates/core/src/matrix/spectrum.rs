// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

//! Power-iteration estimates of the operator norm and of the extreme
//! eigenvalues of Hermitian matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Dense, C64};
use crate::error::{Error, Result};

fn start_vector(dim: usize) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c0f_fee0);
    (0..dim).map(|_| C64::new(rng.gen_range(0.5..1.5), rng.gen_range(-0.5..0.5))).collect()
}

fn norm2(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(x: &mut [C64]) -> f64 {
    let nrm = norm2(x);
    if nrm > 0.0 {
        x.iter_mut().for_each(|z| *z /= nrm);
    }
    nrm
}

/// Estimate of `||A||_2` by power iteration on `A* A`.
///
/// The Rayleigh quotient never exceeds the true largest eigenvalue, so the
/// estimate is a lower bound that converges from below.
pub fn opnorm_estimate(a: &Dense, iters: usize, tol: f64) -> f64 {
    let mut x = start_vector(a.cols());
    normalize(&mut x);
    let mut lambda = 0.0;
    for _ in 0..iters.max(1) {
        let ax = a.matvec(&x);
        let new = ax.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let mut y = a.adjoint_matvec(&ax);
        let done = (new - lambda).abs() <= tol * new;
        lambda = new;
        if normalize(&mut y) == 0.0 || done {
            break;
        }
        x = y;
    }
    lambda.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenBounds {
    pub min: f64,
    pub max: f64,
}

impl EigenBounds {
    pub fn condition(&self) -> f64 {
        self.max / self.min
    }
}

fn dominant_rayleigh(a: &Dense, iters: usize) -> f64 {
    let mut x = start_vector(a.cols());
    normalize(&mut x);
    let mut rq = 0.0;
    for _ in 0..iters.max(1) {
        let mut y = a.matvec(&x);
        rq = x.iter().zip(&y).map(|(u, v)| u.conj() * v).sum::<C64>().re;
        if normalize(&mut y) == 0.0 {
            return 0.0;
        }
        x = y;
    }
    rq
}

/// Largest and smallest eigenvalue of a Hermitian positive definite matrix,
/// by power iteration on `A` and on `A^-1`.
pub fn hermitian_extreme_eigenvalues(a: &Dense, iters: usize) -> Result<EigenBounds> {
    let max = dominant_rayleigh(a, iters);
    let inv_max = dominant_rayleigh(&a.inverse()?, iters);
    if !(max > 0.0 && inv_max > 0.0) {
        return Err(Error::NotPositiveDefinite { step: 0 });
    }
    Ok(EigenBounds { min: 1.0 / inv_max, max })
}
