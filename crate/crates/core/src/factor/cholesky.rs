// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

use super::{FactorKind, FactorizationResult};
use crate::error::{Error, Result};
use crate::matrix::{Dense, SectionMatrix, C64, ZERO};

/// Inputs with `max|A - A*| > HERMITIAN_TOL * max|A|` are rejected.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Lower-triangular `C` with real positive diagonal and `A = C C*`.
pub fn cholesky_dense(a: &Dense) -> Result<Dense> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.rows(), found: a.cols() });
    }
    let asym = a.hermitian_defect();
    if asym > HERMITIAN_TOL * a.max_abs() {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    let n = a.rows();
    let mut c = Dense::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= c[(j, k)].norm_sqr();
        }
        if !(d > 0.0) {
            return Err(Error::NotPositiveDefinite { step: j + 1 });
        }
        let cjj = d.sqrt();
        c[(j, j)] = C64::new(cjj, 0.0);
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= c[(i, k)] * c[(j, k)].conj();
            }
            c[(i, j)] = if s == ZERO { ZERO } else { s / cjj };
        }
    }
    Ok(c)
}

pub fn cholesky(a: &SectionMatrix) -> Result<FactorizationResult> {
    let c = SectionMatrix::from_dense(cholesky_dense(a)?)?.with_label("C");
    let ct = c.adjoint().with_label("C*");
    FactorizationResult::new(FactorKind::Cholesky, a, c, ct)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity() {
        let r = cholesky(&SectionMatrix::identity(2)).unwrap();
        assert_eq!(r.factors.0.as_dense(), &Dense::identity(5));
    }

    #[test]
    fn two_by_two_by_hand() {
        let a = Dense::from_real_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]).unwrap();
        let c = cholesky_dense(&a).unwrap();
        assert_eq!(c[(0, 0)], C64::new(2.0, 0.0));
        assert_eq!(c[(1, 0)], C64::new(1.0, 0.0));
        assert!((c[(1, 1)].re - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(c[(0, 1)], ZERO);
    }

    #[test]
    fn indefinite_and_non_hermitian() {
        let a = Dense::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(cholesky_dense(&a), Err(Error::NotPositiveDefinite { step: 2 })));
        let b = Dense::from_real_rows(&[vec![2.0, 1.0], vec![0.0, 2.0]]).unwrap();
        assert!(matches!(cholesky_dense(&b), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn hermitian_gate_is_relative() {
        let mut a = Dense::from_real_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]).unwrap();
        a[(0, 1)] += C64::new(1e-12, 0.0);
        assert!(cholesky_dense(&a).is_ok());
        a[(0, 1)] += C64::new(1e-10, 0.0);
        assert!(cholesky_dense(&a).is_err());
    }
}
