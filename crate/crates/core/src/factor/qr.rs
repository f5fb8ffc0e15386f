// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

use super::{FactorKind, FactorizationResult};
use crate::error::{Error, Result};
use crate::matrix::{Dense, SectionMatrix, C64, ZERO};

/// Householder QR with phases normalized so that `diag(R)` is real positive.
pub fn qr(a: &SectionMatrix) -> Result<FactorizationResult> {
    let n = a.dim();
    let rank_floor = 1e-14 * a.norm_fro();
    let mut r = a.as_dense().clone();
    let mut reflectors: Vec<Vec<C64>> = Vec::with_capacity(n);

    for k in 0..n {
        let xnorm = (k..n).map(|i| r[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if xnorm <= rank_floor || xnorm == 0.0 {
            return Err(Error::RankDeficient { column: k });
        }
        let x0 = r[(k, k)];
        let phase = if x0 == ZERO { C64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;
        let mut v: Vec<C64> = (k..n).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm > 0.0 {
            v.iter_mut().for_each(|z| *z /= vnorm);
            apply_reflector(&mut r, &v, k, k);
        }
        reflectors.push(v);
    }

    let mut q = Dense::identity(n);
    for (k, v) in reflectors.iter().enumerate().rev() {
        apply_reflector(&mut q, v, k, k);
    }

    for i in 0..n {
        for j in 0..i {
            r[(i, j)] = ZERO;
        }
    }
    for k in 0..n {
        let d = r[(k, k)];
        let ph = d / d.norm();
        for j in k..n {
            r[(k, j)] *= ph.conj();
        }
        r[(k, k)] = C64::new(r[(k, k)].re, 0.0);
        for i in 0..n {
            q[(i, k)] *= ph;
        }
    }

    FactorizationResult::new(
        FactorKind::Qr,
        a,
        SectionMatrix::from_dense(q)?.with_label("Q"),
        SectionMatrix::from_dense(r)?.with_label("R"),
    )
}

/// `M[k.., c0..] <- (I - 2 v v*) M[k.., c0..]` for a unit vector `v`.
fn apply_reflector(m: &mut Dense, v: &[C64], k: usize, c0: usize) {
    for j in c0..m.cols() {
        let mut s = ZERO;
        for (t, vi) in v.iter().enumerate() {
            s += vi.conj() * m[(k + t, j)];
        }
        if s == ZERO {
            continue;
        }
        let s2 = s * 2.0;
        for (t, vi) in v.iter().enumerate() {
            m[(k + t, j)] -= vi * s2;
        }
    }
}
