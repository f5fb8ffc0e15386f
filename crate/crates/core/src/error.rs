// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} outside the window [-{half_width}, {half_width}]")]
    IndexOutOfWindow { index: i64, half_width: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("pivot breakdown at elimination step {step} (|pivot| = {pivot:e})")]
    PivotBreakdown { step: usize, pivot: f64 },

    #[error("matrix is not Hermitian (max |A - A*| = {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not positive definite (nonpositive pivot at step {step})")]
    NotPositiveDefinite { step: usize },

    #[error("rank deficiency: column {column} has vanishing norm")]
    RankDeficient { column: usize },

    #[error("zero diagonal entry at position {index}")]
    ZeroDiagonal { index: usize },

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("no convergence after {iterations} iterations (last change {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("precondition violated: {what} (value {value})")]
    PreconditionViolated { what: &'static str, value: f64 },

    #[error("section did not stabilize up to n = {n_max} (last change {change:e})")]
    NotStabilized { n_max: usize, change: f64 },

    #[error("symbol offset {offset} exceeds the admissible range +/-{limit}")]
    SupportTooWide { offset: i64, limit: i64 },

    #[error("decay fit needs at least {needed} nonzero offsets, found {found}")]
    TooFewPoints { needed: usize, found: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable snake_case name of the variant, for reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::IndexOutOfWindow { .. } => "index_out_of_window",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::PivotBreakdown { .. } => "pivot_breakdown",
            Error::NotHermitian { .. } => "not_hermitian",
            Error::NotPositiveDefinite { .. } => "not_positive_definite",
            Error::RankDeficient { .. } => "rank_deficient",
            Error::ZeroDiagonal { .. } => "zero_diagonal",
            Error::Singular => "singular",
            Error::NoConvergence { .. } => "no_convergence",
            Error::PreconditionViolated { .. } => "precondition_violated",
            Error::NotStabilized { .. } => "not_stabilized",
            Error::SupportTooWide { .. } => "support_too_wide",
            Error::TooFewPoints { .. } => "too_few_points",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
