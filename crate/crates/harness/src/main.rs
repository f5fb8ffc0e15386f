// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use locfact_core::factor::{cholesky, lu_unpivoted, polar, qr, reconstruction_residual, FactorKind, FactorRecord, PolarSide};
use locfact_core::matrix::io::{read_matrix, write_matrix};
use locfact_core::norms::all_norms;
use locfact_core::series::{align_with_unit_diagonal, series_cholesky, series_lu_inverse, spd_rescale};
use locfact_core::SectionMatrix;
use locfact_harness::baseline::{Baseline, Thresholds};
use locfact_harness::config::{ExperimentConfig, Method};
use locfact_harness::report::{emit, to_csv, Format, Report};
use locfact_harness::{
    run_funcalc, run_inheritance, run_series_validation, run_spectral, FuncalcReport, HarnessError, InheritanceReport,
    SeriesReport, SpectralReport,
};
use serde::Serialize;

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_BASELINE: u8 = 3;

#[derive(Parser)]
#[command(name = "locfact", version, about = "Finite-section factorization and decay experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one input section from a config and write it as a matrix file.
    Gen {
        #[arg(long)]
        config: PathBuf,
        /// Section half-width; defaults to the first configured size.
        #[arg(long)]
        size: Option<usize>,
        /// Defaults to the first configured seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Print the Jaffard, weighted, Schur and GBS norms of a matrix file.
    Norms {
        matrix: PathBuf,
        /// Takes the weight and Jaffard exponent from this config.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Factor a matrix file and write both factors.
    Factor {
        matrix: PathBuf,
        #[arg(long, value_parser = parse_method)]
        method: Method,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Decay inheritance over all sizes, seeds and factorizations.
    Inherit {
        #[command(flatten)]
        run: RunArgs,
        /// Exit with status 3 when the baseline check fails.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        baseline: Option<PathBuf>,
        /// Write the medians of this run as a new baseline.
        #[arg(long)]
        write_baseline: Option<PathBuf>,
    },
    /// Series LU and series Cholesky against the direct factorizations.
    Series {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Spectral factorization of the configured symbols.
    Spectral {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Contour-integral matrix functions against direct evaluation.
    Funcalc {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Convert a JSON report to CSV.
    Report {
        input: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, default_value = "csv")]
        format: Format,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Replace the configured seeds with this one.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value = "json")]
    format: Format,
}

impl RunArgs {
    fn load(&self) -> Result<ExperimentConfig, HarnessError> {
        let mut cfg = ExperimentConfig::load(&self.config)?;
        if let Some(s) = self.seed {
            cfg.seeds = vec![s];
        }
        Ok(cfg)
    }

    fn write<R: Report>(&self, command: &str, cfg: &ExperimentConfig, report: &R) -> Result<PathBuf, HarnessError> {
        std::fs::create_dir_all(&self.out)?;
        let path = self.out.join(format!("{command}_{}.{}", cfg.name, self.format.extension()));
        emit(report, self.format, &path)?;
        Ok(path)
    }
}

fn parse_method(s: &str) -> Result<Method, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| "expected one of lu, cholesky, qr, polar, series_lu, series_cholesky".to_string())
}

/// Failure with the exit status it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        let code = if matches!(e, HarnessError::Core(_)) { EXIT_NUMERICAL } else { EXIT_USAGE };
        Failure { code, error: e.into() }
    }
}

impl From<locfact_core::Error> for Failure {
    fn from(e: locfact_core::Error) -> Self {
        let code = match e {
            locfact_core::Error::Io(_) | locfact_core::Error::Json(_) => EXIT_USAGE,
            _ => EXIT_NUMERICAL,
        };
        Failure { code, error: e.into() }
    }
}

fn usage(error: anyhow::Error) -> Failure {
    Failure { code: EXIT_USAGE, error }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| usage(e.into()))?;
    println!("{text}");
    Ok(())
}

fn factor_pair(a: &SectionMatrix, method: Method) -> locfact_core::Result<(SectionMatrix, SectionMatrix, FactorRecord)> {
    let tol = locfact_harness::config::Tolerances::default();
    let r = match method {
        Method::Lu => lu_unpivoted(a, tol.pivot)?,
        Method::Cholesky => cholesky(a)?,
        Method::Qr => qr(a)?,
        Method::Polar => polar(a, PolarSide::Right, tol.polar_iters, tol.polar)?,
        Method::SeriesCholesky => series_cholesky(a, tol.series, tol.max_terms)?,
        Method::SeriesLu => {
            // factors of alpha A for Hermitian inputs, of A otherwise
            let scaled = match spd_rescale(a) {
                Ok((_, s)) => s,
                Err(locfact_core::Error::NotHermitian { .. }) => a.clone(),
                Err(e) => return Err(e),
            };
            let (l, u) = align_with_unit_diagonal(&series_lu_inverse(&scaled, tol.series, tol.max_terms)?)?;
            let residual = reconstruction_residual(&scaled, &l, &u)?;
            let record = FactorRecord { kind: FactorKind::Lu, residual, convention: FactorKind::Lu.convention().into() };
            return Ok((l, u, record));
        }
    };
    let record = r.record();
    Ok((r.factors.0, r.factors.1, record))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen { config, size, seed, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let n = size.or_else(|| cfg.sizes.first().copied()).context("no size given or configured").map_err(usage)?;
            let s = seed.or_else(|| cfg.seeds.first().copied()).context("no seed given or configured").map_err(usage)?;
            let a = cfg.input(n, s)?;
            std::fs::create_dir_all(&out).map_err(|e| usage(e.into()))?;
            let path = out.join(format!("matrix_n{n}_seed{s}.json"));
            write_matrix(&path, &a)?;
            println!("{}", path.display());
        }
        Command::Norms { matrix, config } => {
            let a = read_matrix(&matrix)?;
            let (s, w) = match config {
                Some(p) => {
                    let cfg = ExperimentConfig::load(&p)?;
                    (cfg.jaffard_s, cfg.weight)
                }
                None => (2.0, locfact_core::Weight::unit()),
            };
            print_json(&all_norms(&a, s, &w)?)?;
        }
        Command::Factor { matrix, method, out } => {
            let a = read_matrix(&matrix)?;
            let (f1, f2, record) = factor_pair(&a, method)?;
            std::fs::create_dir_all(&out).map_err(|e| usage(e.into()))?;
            let stem = method.name();
            write_matrix(out.join(format!("{stem}_f1.json")), &f1)?;
            write_matrix(out.join(format!("{stem}_f2.json")), &f2)?;
            let meta = serde_json::to_string_pretty(&record).map_err(|e| usage(e.into()))?;
            std::fs::write(out.join(format!("{stem}.json")), meta).map_err(|e| usage(e.into()))?;
            print_json(&record)?;
        }
        Command::Inherit { run, strict, baseline, write_baseline } => {
            let cfg = run.load()?;
            let report = run_inheritance(&cfg, run.jobs)?;
            let path = run.write("inherit", &cfg, &report)?;
            eprintln!("wrote {} ({} records, {} failed)", path.display(), report.records.len(), report.failures().count());
            for e in &report.summary {
                println!("{:<32} median {:.4} over {} fits", e.key(), e.median_rate, e.fits);
            }
            if let Some(p) = write_baseline {
                Baseline::from_report(&report, Thresholds::default()).save(&p)?;
                eprintln!("wrote baseline {}", p.display());
            }
            let reference = match &baseline {
                Some(p) => Some(Baseline::load(p)?),
                None if strict => Some(Baseline::from_report(&report, Thresholds::default())),
                None => None,
            };
            if let Some(b) = reference {
                let check = b.check(&report);
                for v in &check.violations {
                    eprintln!("threshold violation: {} median {} vs {}", v.key, v.median, v.threshold);
                }
                for m in &check.mismatches {
                    eprintln!("baseline mismatch: {} baseline {:?} observed {:?}", m.key, m.baseline, m.observed);
                }
                if !check.hash_match && baseline.is_some() {
                    eprintln!("note: config hash differs from the baseline; medians not compared");
                }
                if strict && !check.passed() {
                    return Err(Failure { code: EXIT_BASELINE, error: anyhow::anyhow!("baseline check failed") });
                }
            }
        }
        Command::Series { run } => {
            let cfg = run.load()?;
            let report = run_series_validation(&cfg, run.jobs)?;
            finish_suite(run.write("series", &cfg, &report)?, report.failures())?;
        }
        Command::Spectral { run } => {
            let cfg = run.load()?;
            let report = run_spectral(&cfg, run.jobs)?;
            finish_suite(run.write("spectral", &cfg, &report)?, report.failures())?;
        }
        Command::Funcalc { run } => {
            let cfg = run.load()?;
            let report = run_funcalc(&cfg, run.jobs)?;
            finish_suite(run.write("funcalc", &cfg, &report)?, report.failures())?;
        }
        Command::Report { input, out, format } => {
            let path = convert(&input, &out, format)?;
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn finish_suite(path: PathBuf, failures: usize) -> Result<(), Failure> {
    eprintln!("wrote {}", path.display());
    if failures > 0 {
        return Err(Failure { code: EXIT_NUMERICAL, error: anyhow::anyhow!("{failures} trial(s) failed") });
    }
    Ok(())
}

fn rewrite<R: Report>(report: &R, format: Format, path: &Path) -> Result<(), HarnessError> {
    match format {
        Format::Csv => std::fs::write(path, to_csv(&report.rows())?)?,
        Format::Json => emit(report, Format::Json, path)?,
    }
    Ok(())
}

/// Detects the report type from its distinguishing field.
fn convert(input: &Path, out: &Path, format: Format) -> Result<PathBuf, Failure> {
    let text = std::fs::read_to_string(input).with_context(|| format!("reading {}", input.display())).map_err(usage)?;
    let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    std::fs::create_dir_all(out).map_err(|e| usage(e.into()))?;
    let path = out.join(format!("{stem}.{}", format.extension()));
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| usage(e.into()))?;
    let parse_err = |e: serde_json::Error| usage(e.into());
    if value.get("records").is_some() {
        rewrite(&serde_json::from_value::<InheritanceReport>(value).map_err(parse_err)?, format, &path)?;
    } else if value.get("series_trials").is_some() {
        rewrite(&serde_json::from_value::<SeriesReport>(value).map_err(parse_err)?, format, &path)?;
    } else if value.get("symbols").is_some() {
        rewrite(&serde_json::from_value::<SpectralReport>(value).map_err(parse_err)?, format, &path)?;
    } else if value.get("funcalc_trials").is_some() {
        rewrite(&serde_json::from_value::<FuncalcReport>(value).map_err(parse_err)?, format, &path)?;
    } else {
        return Err(usage(anyhow::anyhow!("{} is not a locfact report", input.display())));
    }
    Ok(path)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
