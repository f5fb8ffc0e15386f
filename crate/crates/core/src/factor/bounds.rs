// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

//! Entrywise checks of the block relations between a section, its inverse
//! and its LU factors. Blocks follow `SectionMatrix::block_partition`.

use serde::{Deserialize, Serialize};

use super::lu::lu_dense;
use crate::error::Result;
use crate::matrix::{Dense, SectionMatrix, ZERO};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EliminationBoundReport {
    /// `max(|lambda_kj| - |beta*_{k-1} B22^{(k-1)}(j)|)` over the `a22` block, clamped at 0.
    pub violation_trailing: f64,
    /// `max(|ell_jk| - |A11^{(k-1)} alpha*_{k-1}(j)|)` over the `a11` block, clamped at 0.
    pub violation_leading: f64,
    pub max_violation: f64,
    /// Residual of the untruncated relations
    /// `lambda*_{k-1} = -beta*_{k-1} (beta^{(k-1)})^{-1}` and
    /// `ell_T = -(alpha_T)^{-1} alpha_{T,-k}`.
    pub exact_relation_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockRelationReport {
    /// `max|L21 - A21 U11^{-1}|`
    pub discrepancy: f64,
}

fn row_times_block(row: &[crate::C64], m: &Dense, k: usize, j: usize) -> crate::C64 {
    (0..k).fold(ZERO, |acc, i| acc + row[i] * m[(i, j)])
}

pub fn verify_elimination_bounds(a: &SectionMatrix) -> Result<EliminationBoundReport> {
    let n = a.n();
    let (l, _u) = lu_dense(a, super::DEFAULT_PIVOT_TOL)?;
    let b = a.as_dense().inverse()?;
    let lam = l.inverse()?;
    let d = a.dim();

    // a22 block, local indices 0..=n
    let b22 = b.block(n, d, n, d);
    let beta = b22.inverse()?;
    let lam22 = lam.block(n, d, n, d);
    let mut v17 = 0.0f64;
    let mut exact = 0.0f64;
    for k in 1..=n {
        let beta_row: Vec<_> = (0..k).map(|i| beta[(k, i)]).collect();
        for j in 0..k {
            let rhs = row_times_block(&beta_row, &b22, k, j).norm();
            v17 = v17.max(lam22[(k, j)].norm() - rhs);
        }
        let lead_inv = beta.block(0, k, 0, k).inverse()?;
        for j in 0..k {
            let want = -row_times_block(&beta_row, &lead_inv, k, j);
            exact = exact.max((lam22[(k, j)] - want).norm());
        }
    }

    // a11 block, local row/col i <-> index i - n; column -k, rows 1-k..=-1
    let a11 = a.as_dense().block(0, n, 0, n);
    let alpha = a11.inverse()?;
    let mut v18 = 0.0f64;
    for k in 2..=n {
        let col = n - k;
        let rows: Vec<usize> = (n - k + 1..n).collect();
        for &r in &rows {
            let rhs = rows.iter().fold(ZERO, |acc, &i| acc + a11[(r, i)] * alpha[(i, col)]).norm();
            v18 = v18.max(l[(r, col)].norm() - rhs);
        }
        let m = rows.len();
        let alpha_t = Dense::from_fn(m, m, |p, q| alpha[(rows[p], rows[q])]);
        let rhs = Dense::from_fn(m, 1, |p, _| alpha[(rows[p], col)]);
        let want = alpha_t.solve(&rhs)?;
        for (p, &r) in rows.iter().enumerate() {
            exact = exact.max((l[(r, col)] + want[(p, 0)]).norm());
        }
    }

    Ok(EliminationBoundReport { violation_trailing: v17, violation_leading: v18, max_violation: v17.max(v18), exact_relation_residual: exact })
}

pub fn verify_block_relation(a: &SectionMatrix) -> Result<BlockRelationReport> {
    let n = a.n();
    let d = a.dim();
    let (l, _) = lu_dense(a, super::DEFAULT_PIVOT_TOL)?;
    let l21 = l.block(n, d, 0, n);
    let a11 = a.as_dense().block(0, n, 0, n);
    let a21 = a.as_dense().block(n, d, 0, n);
    let (_, u11) = lu_dense(&a11, super::DEFAULT_PIVOT_TOL)?;
    let omega = u11.inverse()?;
    let discrepancy = l21.max_abs_diff(&a21.matmul(&omega)?)?;
    Ok(BlockRelationReport { discrepancy })
}
