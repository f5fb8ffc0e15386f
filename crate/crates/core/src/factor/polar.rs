// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::{FactorKind, FactorizationResult};
use crate::error::{Error, Result};
use crate::matrix::{Dense, SectionMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolarSide {
    /// `A = P U`
    Left,
    /// `A = U P`
    Right,
}

/// Newton iteration `X <- (X + X^{-*}) / 2` for the unitary factor.
pub(crate) fn unitary_factor(a: &Dense, max_iter: usize, tol: f64) -> Result<Dense> {
    let mut x = a.clone();
    let mut change = f64::INFINITY;
    for _ in 0..max_iter {
        let inv = x.inverse()?;
        let next = x.add(&inv.adjoint())?.scale(C64::new(0.5, 0.0));
        change = next.max_abs_diff(&x)?;
        x = next;
        if change <= tol * x.max_abs() {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence { iterations: max_iter, residual: change })
}

pub(crate) fn hermitian_part(a: &Dense) -> Dense {
    a.add(&a.adjoint()).expect("square").scale(C64::new(0.5, 0.0))
}

/// Polar factorization; `P` is recovered as `U* A` (right) or `A U*` (left).
pub fn polar(a: &SectionMatrix, side: PolarSide, max_iter: usize, tol: f64) -> Result<FactorizationResult> {
    let u = unitary_factor(a, max_iter, tol)?;
    let ua = u.adjoint();
    let (kind, f1, f2) = match side {
        PolarSide::Right => {
            let p = hermitian_part(&ua.matmul(a)?);
            (FactorKind::PolarRight, u, p)
        }
        PolarSide::Left => {
            let p = hermitian_part(&a.as_dense().matmul(&ua)?);
            (FactorKind::PolarLeft, p, u)
        }
    };
    let f1 = SectionMatrix::from_dense(f1)?;
    let f2 = SectionMatrix::from_dense(f2)?;
    FactorizationResult::new(kind, a, f1, f2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn section(rows: &[Vec<f64>]) -> SectionMatrix {
        SectionMatrix::from_dense(Dense::from_real_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn unitary_input() {
        let q = section(&[vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0]]);
        let r = polar(&q, PolarSide::Right, 50, 1e-14).unwrap();
        assert!(r.factors.0.max_abs_diff(&q).unwrap() < 1e-15);
        assert!(r.factors.1.max_abs_diff(&Dense::identity(3)).unwrap() < 1e-15);
    }

    #[test]
    fn scaled_rotation_both_sides() {
        let a = section(&[vec![3.0, -4.0, 0.0], vec![4.0, 3.0, 0.0], vec![0.0, 0.0, 5.0]]);
        let u = Dense::from_real_rows(&[vec![0.6, -0.8, 0.0], vec![0.8, 0.6, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        let p = Dense::identity(3).scale(C64::new(5.0, 0.0));
        let r = polar(&a, PolarSide::Right, 50, 1e-14).unwrap();
        assert!(r.factors.0.max_abs_diff(&u).unwrap() < 1e-14);
        assert!(r.factors.1.max_abs_diff(&p).unwrap() < 1e-13);
        let l = polar(&a, PolarSide::Left, 50, 1e-14).unwrap();
        assert!(l.factors.0.max_abs_diff(&p).unwrap() < 1e-13);
        assert!(l.factors.1.max_abs_diff(&u).unwrap() < 1e-14);
    }

    #[test]
    fn diagonal_signs() {
        let a = section(&[vec![2.0, 0.0, 0.0], vec![0.0, -3.0, 0.0], vec![0.0, 0.0, 1.0]]);
        let r = polar(&a, PolarSide::Right, 50, 1e-14).unwrap();
        let u = Dense::from_real_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, -1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        let p = Dense::from_real_rows(&[vec![2.0, 0.0, 0.0], vec![0.0, 3.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        assert!(r.factors.0.max_abs_diff(&u).unwrap() < 1e-15);
        assert!(r.factors.1.max_abs_diff(&p).unwrap() < 1e-14);
    }

    #[test]
    fn singular_and_non_convergent() {
        let z = section(&[vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]]);
        assert!(matches!(polar(&z, PolarSide::Right, 50, 1e-14), Err(Error::Singular)));
        let a = section(&[vec![1e3, 1.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
        assert!(matches!(polar(&a, PolarSide::Right, 2, 1e-14), Err(Error::NoConvergence { iterations: 2, .. })));
    }
}
