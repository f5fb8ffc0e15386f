// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

use super::{FactorKind, FactorizationResult};
use crate::error::{Error, Result};
use crate::matrix::{Dense, SectionMatrix, ONE, ZERO};

pub const DEFAULT_PIVOT_TOL: f64 = 1e-14;

/// Doolittle elimination without pivoting. Breakdown is reported with the
/// 1-based step at which `|pivot| <= tol_pivot * max|A|`.
pub fn lu_dense(a: &Dense, tol_pivot: f64) -> Result<(Dense, Dense)> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.rows(), found: a.cols() });
    }
    let n = a.rows();
    let floor = tol_pivot * a.max_abs();
    let mut u = a.clone();
    let mut l = Dense::identity(n);
    for k in 0..n {
        let pivot = u[(k, k)];
        if pivot.norm() <= floor || pivot == ZERO {
            return Err(Error::PivotBreakdown { step: k + 1, pivot: pivot.norm() });
        }
        let inv = ONE / pivot;
        for i in (k + 1)..n {
            let f = u[(i, k)] * inv;
            l[(i, k)] = f;
            u[(i, k)] = ZERO;
            if f == ZERO {
                continue;
            }
            for j in (k + 1)..n {
                let t = u[(k, j)];
                u[(i, j)] -= f * t;
            }
        }
    }
    Ok((l, u))
}

pub fn lu_unpivoted(a: &SectionMatrix, tol_pivot: f64) -> Result<FactorizationResult> {
    let (l, u) = lu_dense(a, tol_pivot)?;
    FactorizationResult::new(
        FactorKind::Lu,
        a,
        SectionMatrix::from_dense(l)?.with_label("L"),
        SectionMatrix::from_dense(u)?.with_label("U"),
    )
}
