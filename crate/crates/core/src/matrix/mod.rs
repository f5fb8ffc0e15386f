// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

//! Finite sections `P_n A P_n` of bi-infinite matrices.
//!
//! A [`SectionMatrix`] of half-width `n` holds the entries `a_jk` for
//! `j, k` in `[-n, n]`; section index `(j, k)` lives at storage `(j + n, k + n)`.

mod dense;
mod generate;
pub mod io;
mod spectrum;
mod stabilize;
mod symbol;

use std::ops::Deref;

pub use dense::{Dense, C64};
pub(crate) use dense::{ONE, ZERO};
pub use generate::{generate_banded, generate_expdecay, generate_jaffard, laurent_from_symbol};
pub use spectrum::{hermitian_extreme_eigenvalues, opnorm_estimate, EigenBounds};
pub use stabilize::{stabilized_section, StabilizeOptions, Stabilized};
pub use symbol::{SymbolFile, SymbolSeries};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SectionMatrix {
    n: usize,
    mat: Dense,
    pub label: Option<String>,
}

// labels are display metadata and do not take part in equality
impl PartialEq for SectionMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.mat == other.mat
    }
}

impl Deref for SectionMatrix {
    type Target = Dense;
    fn deref(&self) -> &Dense {
        &self.mat
    }
}

impl SectionMatrix {
    pub fn from_dense(mat: Dense) -> Result<Self> {
        let dim = mat.rows();
        if !mat.is_square() || dim.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "a section needs an odd square shape, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        Ok(SectionMatrix { n: dim / 2, mat, label: None })
    }

    /// Builds a section from `f(j, k)` in section indices.
    pub fn from_fn(n: usize, mut f: impl FnMut(i64, i64) -> C64) -> Self {
        let off = n as i64;
        let mat = Dense::from_fn(2 * n + 1, 2 * n + 1, |r, c| f(r as i64 - off, c as i64 - off));
        SectionMatrix { n, mat, label: None }
    }

    pub fn zeros(n: usize) -> Self {
        SectionMatrix { n, mat: Dense::zeros(2 * n + 1, 2 * n + 1), label: None }
    }

    pub fn identity(n: usize) -> Self {
        SectionMatrix { n, mat: Dense::identity(2 * n + 1), label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Half-width.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// `2n + 1`
    #[inline]
    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    pub fn as_dense(&self) -> &Dense {
        &self.mat
    }

    pub fn into_dense(self) -> Dense {
        self.mat
    }

    #[inline]
    fn slot(&self, idx: i64) -> Result<usize> {
        let s = idx + self.n as i64;
        if s < 0 || s > 2 * self.n as i64 {
            return Err(Error::IndexOutOfWindow { index: idx, half_width: self.n });
        }
        Ok(s as usize)
    }

    /// Entry `a_jk` in section indices.
    pub fn at(&self, j: i64, k: i64) -> Result<C64> {
        Ok(self.mat[(self.slot(j)?, self.slot(k)?)])
    }

    fn wrap(&self, mat: Dense) -> Self {
        SectionMatrix { n: self.n, mat, label: None }
    }

    fn check_n(&self, other: &SectionMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &SectionMatrix) -> Result<Self> {
        self.check_n(other)?;
        Ok(self.wrap(self.mat.matmul(&other.mat)?))
    }

    pub fn add(&self, other: &SectionMatrix) -> Result<Self> {
        self.check_n(other)?;
        Ok(self.wrap(self.mat.add(&other.mat)?))
    }

    pub fn sub(&self, other: &SectionMatrix) -> Result<Self> {
        self.check_n(other)?;
        Ok(self.wrap(self.mat.sub(&other.mat)?))
    }

    pub fn adjoint(&self) -> Self {
        self.wrap(self.mat.adjoint())
    }

    pub fn scale(&self, s: C64) -> Self {
        self.wrap(self.mat.scale(s))
    }

    pub fn shift(&self, s: C64) -> Self {
        self.wrap(self.mat.shift(s))
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(self.wrap(self.mat.inverse()?))
    }

    /// Keeps `a_jk` for `j >= k`.
    pub fn proj_lower(&self) -> Self {
        let mut m = self.mat.clone();
        for i in 0..self.dim() {
            for j in (i + 1)..self.dim() {
                m[(i, j)] = ZERO;
            }
        }
        self.wrap(m)
    }

    /// Keeps `a_jk` for `j < k`; complementary to [`proj_lower`](Self::proj_lower).
    pub fn proj_strict_upper(&self) -> Self {
        let mut m = self.mat.clone();
        for i in 0..self.dim() {
            for j in 0..=i {
                m[(i, j)] = ZERO;
            }
        }
        self.wrap(m)
    }

    /// Modulation `f_A(z)`: scales the diagonal `j - k = m` by `z^m`.
    pub fn diag_scale(&self, z: C64) -> Result<Self> {
        if z == ZERO {
            return Err(Error::InvalidParameter("diag_scale needs z != 0".into()));
        }
        let d = self.dim();
        // powers z^m for m in -(d-1)..=(d-1)
        let mut pow = vec![ONE; 2 * d - 1];
        let zinv = ONE / z;
        for m in 1..d {
            pow[d - 1 + m] = pow[d - 2 + m] * z;
            pow[d - 1 - m] = pow[d - m] * zinv;
        }
        let mut m = self.mat.clone();
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] *= pow[d - 1 + i - j];
            }
        }
        Ok(self.wrap(m))
    }

    /// The central section of half-width `n - margin`.
    pub fn interior(&self, margin: usize) -> Result<Self> {
        if margin > self.n {
            return Err(Error::InvalidParameter(format!(
                "margin {margin} exceeds half-width {}",
                self.n
            )));
        }
        let d = self.dim() - margin;
        Ok(SectionMatrix { n: self.n - margin, mat: self.mat.block(margin, d, margin, d), label: None })
    }

    /// Embeds (or crops) into half-width `m`, padding with zeros.
    pub fn resized(&self, m: usize) -> Self {
        let off = self.n as i64;
        SectionMatrix::from_fn(m, |j, k| {
            if j.abs() <= off && k.abs() <= off {
                self.mat[((j + off) as usize, (k + off) as usize)]
            } else {
                ZERO
            }
        })
    }

    pub fn block_partition(&self) -> Result<BlockPartition> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("block partition needs n >= 1".into()));
        }
        let n = self.n;
        let d = self.dim();
        let first = -(n as i64);
        Ok(BlockPartition {
            a11: IndexedBlock { row_start: first, col_start: first, mat: self.mat.block(0, n, 0, n) },
            a12: IndexedBlock { row_start: first, col_start: 0, mat: self.mat.block(0, n, n, d) },
            a21: IndexedBlock { row_start: 0, col_start: first, mat: self.mat.block(n, d, 0, n) },
            a22: IndexedBlock { row_start: 0, col_start: 0, mat: self.mat.block(n, d, n, d) },
        })
    }
}

/// A rectangular block that remembers the section index of its first row and column.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexedBlock {
    pub row_start: i64,
    pub col_start: i64,
    pub mat: Dense,
}

impl IndexedBlock {
    pub fn at(&self, j: i64, k: i64) -> C64 {
        self.mat[((j - self.row_start) as usize, (k - self.col_start) as usize)]
    }
}

/// Split at index 0: `a11` holds `j, k < 0`, `a22` holds `j, k >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPartition {
    pub a11: IndexedBlock,
    pub a12: IndexedBlock,
    pub a21: IndexedBlock,
    pub a22: IndexedBlock,
}

impl BlockPartition {
    pub fn reassemble(&self) -> Result<SectionMatrix> {
        let n = self.a11.mat.rows();
        let mut m = Dense::zeros(2 * n + 1, 2 * n + 1);
        m.set_block(0, 0, &self.a11.mat);
        m.set_block(0, n, &self.a12.mat);
        m.set_block(n, 0, &self.a21.mat);
        m.set_block(n, n, &self.a22.mat);
        SectionMatrix::from_dense(m)
    }
}

/// `a* a + delta I`.
pub fn make_spd(a: &SectionMatrix, delta: f64) -> Result<SectionMatrix> {
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter("make_spd needs delta > 0".into()));
    }
    let mut m = a.adjoint().matmul(a)?.shift(C64::new(delta, 0.0));
    // exact Hermitian symmetry; the product only guarantees it to rounding
    let d = m.dim();
    let mut mat = m.mat.clone();
    for i in 0..d {
        mat[(i, i)] = C64::new(mat[(i, i)].re, 0.0);
        for j in (i + 1)..d {
            let v = (mat[(i, j)] + mat[(j, i)].conj()) * 0.5;
            mat[(i, j)] = v;
            mat[(j, i)] = v.conj();
        }
    }
    m.mat = mat;
    Ok(m)
}

pub fn matmul(a: &SectionMatrix, b: &SectionMatrix) -> Result<SectionMatrix> {
    a.matmul(b)
}

pub fn adjoint(a: &SectionMatrix) -> SectionMatrix {
    a.adjoint()
}

pub fn add(a: &SectionMatrix, b: &SectionMatrix) -> Result<SectionMatrix> {
    a.add(b)
}

pub fn sub(a: &SectionMatrix, b: &SectionMatrix) -> Result<SectionMatrix> {
    a.sub(b)
}

pub fn identity(n: usize) -> SectionMatrix {
    SectionMatrix::identity(n)
}

pub fn proj_lower(a: &SectionMatrix) -> SectionMatrix {
    a.proj_lower()
}

pub fn proj_strict_upper(a: &SectionMatrix) -> SectionMatrix {
    a.proj_strict_upper()
}

pub fn diag_scale(a: &SectionMatrix, z: C64) -> Result<SectionMatrix> {
    a.diag_scale(z)
}

pub fn block_partition(a: &SectionMatrix) -> Result<BlockPartition> {
    a.block_partition()
}
