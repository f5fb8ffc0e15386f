// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

//! Factorizations of matrices with off-diagonal decay.
//!
//! Matrices are finite sections over symmetric index windows `[-n, n]`.
//! The crate builds such sections with prescribed decay, factors them
//! (LU, Cholesky, QR, polar) directly and through the projection series for
//! the inverse triangular factors, measures decay-algebra norms and fitted
//! decay rates, factors Laurent symbols spectrally, and evaluates decay
//! preserving matrix functions.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod factor;
pub mod funcs;
pub mod matrix;
pub mod norms;
pub mod series;
pub mod spectral;
pub mod weight;

pub use error::{Error, Result};
pub use matrix::{SectionMatrix, SymbolSeries, C64};
pub use weight::Weight;
