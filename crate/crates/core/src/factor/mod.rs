// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

//! Direct factorizations of finite sections.
//!
//! Conventions: `L` in LU has unit diagonal (no pivoting, ever), the Cholesky
//! factor and `R` in QR have real positive diagonals, and the polar factor
//! `P` is the positive square root `(A*A)^{1/2}` (right) or `(AA*)^{1/2}` (left).

mod cholesky;
mod bounds;
mod lu;
mod polar;
mod qr;
mod triangular;

use serde::{Deserialize, Serialize};

pub use cholesky::{cholesky, cholesky_dense, HERMITIAN_TOL};
pub use bounds::{verify_elimination_bounds, verify_block_relation, EliminationBoundReport, BlockRelationReport};
pub use lu::{lu_dense, lu_unpivoted, DEFAULT_PIVOT_TOL};
pub(crate) use polar::hermitian_part;
pub use polar::{polar, PolarSide};
pub use qr::qr;
pub use triangular::{triangular_inverse, triangular_inverse_dense, Triangle};

use crate::error::Result;
use crate::matrix::SectionMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    Lu,
    Cholesky,
    Qr,
    PolarLeft,
    PolarRight,
}

impl FactorKind {
    pub fn convention(self) -> &'static str {
        match self {
            FactorKind::Lu => "A = L U, unit-diagonal L",
            FactorKind::Cholesky => "A = C C*, positive-diagonal C",
            FactorKind::Qr => "A = Q R, positive-diagonal R",
            FactorKind::PolarLeft => "A = P U, P = (A A*)^(1/2)",
            FactorKind::PolarRight => "A = U P, P = (A* A)^(1/2)",
        }
    }
}

/// `A = F1 * F2` together with the relative reconstruction error.
#[derive(Debug, Clone)]
pub struct FactorizationResult {
    pub kind: FactorKind,
    pub factors: (SectionMatrix, SectionMatrix),
    /// `max|A - F1 F2| / max|A|`
    pub residual: f64,
    pub convention: String,
}

impl FactorizationResult {
    pub(crate) fn new(kind: FactorKind, a: &SectionMatrix, f1: SectionMatrix, f2: SectionMatrix) -> Result<Self> {
        let residual = reconstruction_residual(a, &f1, &f2)?;
        Ok(FactorizationResult { kind, factors: (f1, f2), residual, convention: kind.convention().to_string() })
    }

    pub fn record(&self) -> FactorRecord {
        FactorRecord { kind: self.kind, residual: self.residual, convention: self.convention.clone() }
    }
}

/// JSON metadata written next to the two factor matrix files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorRecord {
    pub kind: FactorKind,
    pub residual: f64,
    pub convention: String,
}

pub fn reconstruction_residual(a: &SectionMatrix, f1: &SectionMatrix, f2: &SectionMatrix) -> Result<f64> {
    let scale = a.max_abs();
    let err = a.max_abs_diff(f1.matmul(f2)?.as_dense())?;
    Ok(if scale > 0.0 { err / scale } else { err })
}
