// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};
use crate::matrix::{Dense, SectionMatrix, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Triangle {
    Lower,
    Upper,
}

/// Inverse of a triangular matrix by substitution, column by column.
pub fn triangular_inverse_dense(t: &Dense, kind: Triangle) -> Result<Dense> {
    if !t.is_square() {
        return Err(Error::DimensionMismatch { expected: t.rows(), found: t.cols() });
    }
    let ok = match kind {
        Triangle::Lower => t.is_lower_triangular(),
        Triangle::Upper => t.is_upper_triangular(),
    };
    if !ok {
        return Err(Error::InvalidParameter(format!("input is not {kind:?} triangular")));
    }
    let n = t.rows();
    if let Some(index) = (0..n).find(|&i| t[(i, i)] == ZERO) {
        return Err(Error::ZeroDiagonal { index });
    }
    // an upper inverse is the adjoint of the lower inverse of the adjoint
    let lower = match kind {
        Triangle::Lower => t.clone(),
        Triangle::Upper => t.adjoint(),
    };
    let mut x = Dense::zeros(n, n);
    for c in 0..n {
        x[(c, c)] = ONE / lower[(c, c)];
        for i in (c + 1)..n {
            let mut s = ZERO;
            for k in c..i {
                s += lower[(i, k)] * x[(k, c)];
            }
            x[(i, c)] = -s / lower[(i, i)];
        }
    }
    Ok(match kind {
        Triangle::Lower => x,
        Triangle::Upper => x.adjoint(),
    })
}

pub fn triangular_inverse(t: &SectionMatrix, kind: Triangle) -> Result<SectionMatrix> {
    SectionMatrix::from_dense(triangular_inverse_dense(t, kind)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::C64;

    #[test]
    fn identity_and_unipotent() {
        let i = Dense::identity(4);
        assert_eq!(triangular_inverse_dense(&i, Triangle::Lower).unwrap(), i);
        let a = C64::new(0.3, -1.2);
        let mut l = Dense::identity(2);
        l[(1, 0)] = a;
        let inv = triangular_inverse_dense(&l, Triangle::Lower).unwrap();
        assert_eq!(inv[(1, 0)], -a);
        assert_eq!(inv[(0, 0)], ONE);
        let u = triangular_inverse_dense(&l.adjoint(), Triangle::Upper).unwrap();
        assert_eq!(u[(0, 1)], -a.conj());
    }

    #[test]
    fn rejects_bad_input() {
        let mut l = Dense::identity(3);
        l[(1, 1)] = ZERO;
        assert!(matches!(triangular_inverse_dense(&l, Triangle::Lower), Err(Error::ZeroDiagonal { index: 1 })));
        let mut f = Dense::identity(3);
        f[(0, 2)] = ONE;
        assert!(triangular_inverse_dense(&f, Triangle::Lower).is_err());
        assert!(triangular_inverse_dense(&f, Triangle::Upper).is_ok());
    }
}
