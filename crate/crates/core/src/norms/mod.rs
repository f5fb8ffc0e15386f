// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

//! Decay-algebra norms of finite sections, decay profiles and fits.
//!
//! All suprema and sums run over the section only. For bulk measurements
//! pass [`SectionMatrix::interior`] instead of the full section.

mod fit;
mod profile;

use serde::{Deserialize, Serialize};

pub use fit::{fit_exponential, fit_polynomial, DecayFit, DecayModel, FitRecord, FitWindow};
pub use profile::{profile, DecayProfile};

use crate::error::Result;
use crate::matrix::SectionMatrix;
use crate::weight::Weight;

/// `v(m)` for `m` in `[-2n, 2n]`, indexed by `m + 2n`.
fn offset_weights(a: &SectionMatrix, w: &Weight) -> Result<Vec<f64>> {
    w.table(2 * a.n())
}

/// `sup |a_jk| (1 + |j-k|)^s`
pub fn norm_jaffard(a: &SectionMatrix, s: f64) -> f64 {
    let d = a.dim();
    let mut best: f64 = 0.0;
    for i in 0..d {
        for (j, z) in a.row(i).iter().enumerate() {
            best = best.max(z.norm() * (1.0 + i.abs_diff(j) as f64).powf(s));
        }
    }
    best
}

/// `sup |a_jk| v(j-k)`
pub fn norm_weighted(a: &SectionMatrix, w: &Weight) -> Result<f64> {
    let v = offset_weights(a, w)?;
    let d = a.dim();
    let mut best: f64 = 0.0;
    for i in 0..d {
        for (j, z) in a.row(i).iter().enumerate() {
            best = best.max(z.norm() * v[d - 1 + i - j]);
        }
    }
    Ok(best)
}

/// Weighted Schur norm: the larger of the weighted row-sum and column-sum suprema.
pub fn norm_schur(a: &SectionMatrix, w: &Weight) -> Result<f64> {
    let v = offset_weights(a, w)?;
    let d = a.dim();
    let mut col = vec![0.0; d];
    let mut row_best: f64 = 0.0;
    for i in 0..d {
        let mut r = 0.0;
        for (j, z) in a.row(i).iter().enumerate() {
            let x = z.norm() * v[d - 1 + i - j];
            r += x;
            col[j] += x;
        }
        row_best = row_best.max(r);
    }
    Ok(col.into_iter().fold(row_best, f64::max))
}

/// Gohberg-Baskakov-Sjostrand norm: `sum_m v(m) sup_k |a_{k, k-m}|`.
pub fn norm_gbs(a: &SectionMatrix, w: &Weight) -> Result<f64> {
    let v = offset_weights(a, w)?;
    let d = a.dim();
    let mut sup = vec![0.0f64; 2 * d - 1];
    for i in 0..d {
        for (j, z) in a.row(i).iter().enumerate() {
            let m = d - 1 + i - j;
            sup[m] = sup[m].max(z.norm());
        }
    }
    Ok(sup.iter().zip(&v).map(|(s, w)| s * w).sum())
}

/// All four norms of one section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormSet {
    pub jaffard: f64,
    pub weighted: f64,
    pub schur: f64,
    pub gbs: f64,
}

pub fn all_norms(a: &SectionMatrix, s: f64, w: &Weight) -> Result<NormSet> {
    Ok(NormSet {
        jaffard: norm_jaffard(a, s),
        weighted: norm_weighted(a, w)?,
        schur: norm_schur(a, w)?,
        gbs: norm_gbs(a, w)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{generate_banded, laurent_from_symbol, SymbolSeries, C64};

    fn tridiag(n: usize) -> SectionMatrix {
        laurent_from_symbol(&SymbolSeries::real(&[(-1, 0.5), (0, 2.0), (1, 0.5)]), n).unwrap()
    }

    #[test]
    fn identity_norms_are_one() {
        let i = SectionMatrix::identity(5);
        for s in [0.0, 1.0, 3.5] {
            assert_eq!(norm_jaffard(&i, s), 1.0);
        }
        let w = Weight::polynomial(2.0);
        assert_eq!(all_norms(&i, 2.0, &w).unwrap(), NormSet { jaffard: 1.0, weighted: 1.0, schur: 1.0, gbs: 1.0 });
    }

    #[test]
    fn jaffard_examples() {
        let env = SectionMatrix::from_fn(8, |j, k| C64::new((1.0 + (j - k).abs() as f64).powi(-2), 0.0));
        assert!((norm_jaffard(&env, 2.0) - 1.0).abs() < 1e-14);
        assert!((norm_jaffard(&env, 3.0) - 17.0).abs() < 1e-12);
    }

    #[test]
    fn laurent_tridiagonal_examples() {
        let a = tridiag(6);
        assert_eq!(norm_weighted(&a, &Weight::unit()).unwrap(), 2.0);
        assert_eq!(norm_weighted(&a, &Weight::polynomial(2.0)).unwrap(), 2.0);
        assert_eq!(norm_schur(&a, &Weight::unit()).unwrap(), 3.0);
        assert_eq!(norm_gbs(&a, &Weight::unit()).unwrap(), 3.0);
    }

    #[test]
    fn diagonal_schur() {
        let mut d = vec![C64::new(1.0, 0.0); 5];
        d[2] = C64::new(-3.0, 0.0);
        let a = SectionMatrix::from_dense(crate::matrix::Dense::diagonal(&d)).unwrap();
        assert_eq!(norm_schur(&a, &Weight::unit()).unwrap(), 3.0);
    }

    #[test]
    fn banded_gbs_bound() {
        for seed in 0..5 {
            let a = generate_banded(10, 1, seed).unwrap();
            assert!(norm_gbs(&a, &Weight::unit()).unwrap() <= 3.0);
        }
    }

    #[test]
    fn tabulated_weight_too_short() {
        let w = Weight::tabulated(vec![1.0, 1.0, 1.0]).unwrap();
        assert!(norm_gbs(&tridiag(3), &w).is_err());
    }
}
