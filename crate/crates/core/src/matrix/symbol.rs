// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{C64, ZERO};
use crate::error::{Error, Result};

/// Finitely supported Laurent symbol `sigma(theta) = sum_m c_m theta^m`,
/// where `c_m = a_{j, j-m}` for the associated Laurent matrix.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SymbolSeries {
    coeffs: BTreeMap<i64, C64>,
}

impl SymbolSeries {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, C64)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (m, c) in pairs {
            *coeffs.entry(m).or_insert(ZERO) += c;
        }
        SymbolSeries { coeffs }
    }

    pub fn real(pairs: &[(i64, f64)]) -> Self {
        Self::from_pairs(pairs.iter().map(|&(m, c)| (m, C64::new(c, 0.0))))
    }

    pub fn coeff(&self, m: i64) -> C64 {
        self.coeffs.get(&m).copied().unwrap_or(ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        self.coeffs.iter().map(|(&m, &c)| (m, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest and largest recorded offset.
    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = *self.coeffs.keys().next()?;
        let hi = *self.coeffs.keys().next_back()?;
        Some((lo, hi))
    }

    /// Value at `theta = e^{it}`.
    pub fn eval(&self, t: f64) -> C64 {
        self.iter().map(|(m, c)| c * C64::from_polar(1.0, m as f64 * t)).sum()
    }

    /// Value at an arbitrary nonzero complex `z`.
    pub fn eval_z(&self, z: C64) -> C64 {
        self.iter().map(|(m, c)| c * z.powi(m as i32)).sum()
    }

    /// Symbol of the adjoint Laurent matrix: `c*_m = conj(c_{-m})`.
    pub fn adjoint(&self) -> Self {
        Self::from_pairs(self.iter().map(|(m, c)| (-m, c.conj())))
    }

    /// Product of symbols (convolution of coefficients).
    pub fn mul(&self, other: &SymbolSeries) -> Self {
        let mut pairs = Vec::with_capacity(self.len() * other.len());
        for (m, a) in self.iter() {
            for (k, b) in other.iter() {
                pairs.push((m + k, a * b));
            }
        }
        Self::from_pairs(pairs)
    }

    /// Drops coefficients with magnitude `<= tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        SymbolSeries { coeffs: self.coeffs.iter().filter(|(_, c)| c.norm() > tol).map(|(&m, &c)| (m, c)).collect() }
    }

    pub fn to_file(&self) -> SymbolFile {
        SymbolFile {
            offsets: self.coeffs.keys().copied().collect(),
            re: self.coeffs.values().map(|c| c.re).collect(),
            im: if self.coeffs.values().all(|c| c.im == 0.0) {
                None
            } else {
                Some(self.coeffs.values().map(|c| c.im).collect())
            },
        }
    }

    pub fn from_file(f: &SymbolFile) -> Result<Self> {
        if f.re.len() != f.offsets.len() {
            return Err(Error::DimensionMismatch { expected: f.offsets.len(), found: f.re.len() });
        }
        if let Some(im) = &f.im {
            if im.len() != f.offsets.len() {
                return Err(Error::DimensionMismatch { expected: f.offsets.len(), found: im.len() });
            }
        }
        Ok(Self::from_pairs(f.offsets.iter().enumerate().map(|(i, &m)| {
            let im = f.im.as_ref().map_or(0.0, |v| v[i]);
            (m, C64::new(f.re[i], im))
        })))
    }
}

/// On-disk form `{"offsets": [...], "re": [...], "im": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolFile {
    pub offsets: Vec<i64>,
    pub re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<f64>>,
}

impl Serialize for SymbolSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymbolSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = SymbolFile::deserialize(d)?;
        SymbolSeries::from_file(&f).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_cosine_symbol() {
        let s = SymbolSeries::real(&[(-1, 0.5), (0, 2.0), (1, 0.5)]);
        for t in [0.0, 0.3, 2.0] {
            assert!((s.eval(t) - C64::new(2.0 + t.cos(), 0.0)).norm() < 1e-15);
        }
        assert_eq!(s.support(), Some((-1, 1)));
    }

    #[test]
    fn product_of_causal_and_adjoint() {
        let p = SymbolSeries::real(&[(0, 1.0), (1, 0.5)]);
        let q = p.mul(&p.adjoint());
        assert_eq!(q, SymbolSeries::real(&[(-1, 0.5), (0, 1.25), (1, 0.5)]));
    }

    #[test]
    fn file_roundtrip_and_errors() {
        let s = SymbolSeries::from_pairs([(-1, C64::new(0.5, 0.25)), (2, C64::new(1.0, 0.0))]);
        let txt = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<SymbolSeries>(&txt).unwrap(), s);
        let real: SymbolSeries = serde_json::from_str(r#"{"offsets":[0],"re":[1.0]}"#).unwrap();
        assert_eq!(real.coeff(0), C64::new(1.0, 0.0));
        assert!(serde_json::from_str::<SymbolSeries>(r#"{"offsets":[0,1],"re":[1.0]}"#).is_err());
    }
}
