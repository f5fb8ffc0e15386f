// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

//! Experiment drivers behind the `locfact` command line tool.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baseline;
pub mod config;
pub mod funcalc_suite;
pub mod inheritance;
pub mod report;
pub mod series_suite;
pub mod spectral_suite;

pub use config::ExperimentConfig;
pub use inheritance::{run_inheritance, InheritanceReport};
pub use funcalc_suite::{run_funcalc, FuncalcReport};
pub use series_suite::{run_series_validation, SeriesReport};
pub use spectral_suite::{run_spectral, SpectralReport};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] locfact_core::Error),
}

/// Runs `f` on a dedicated pool of `jobs` threads, or on the global pool.
pub fn run_in_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, HarnessError> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(HarnessError::Config("--jobs must be positive".into())),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}
