// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

//! Projection series for the inverse triangular factors of a section close
//! to the identity, SPD rescaling, and diagonal-scaling preconditioning.
//!
//! With `M = A - I`, `P` the lower projection (diagonal included) and `Q`
//! the strictly upper projection,
//!
//! ```text
//! T_1 = P M,  T_{m+1} = P[T_m M],    L^{-1} = I + sum (-1)^m T_m
//! S_1 = Q M,  S_{m+1} = Q[M S_m],    U^{-1} = I + sum (-1)^m S_m
//! ```
//!
//! so that `L^{-1} A U^{-1} = I`. The series leaves the diagonal in `L`.
//! The mirrored recursion is [`series_ul_inverse`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{
    lu_unpivoted, triangular_inverse, FactorKind, FactorizationResult, Triangle, DEFAULT_PIVOT_TOL,
};
use crate::matrix::{hermitian_extreme_eigenvalues, opnorm_estimate, Dense, SectionMatrix, C64, ONE};

pub const DEFAULT_SERIES_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_TERMS: usize = 500;
/// Power-iteration budget for eigenvalue estimates in [`spd_rescale`].
pub const RESCALE_ITERS: usize = 200;

const OPNORM_ITERS: usize = 2000;
const OPNORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SeriesResult {
    pub l_inv: SectionMatrix,
    pub u_inv: SectionMatrix,
    pub terms_used: usize,
    /// Max-entry norm of the last term added.
    pub tail_estimate: f64,
    pub converged: bool,
}

impl SeriesResult {
    pub fn record(&self) -> SeriesRecord {
        SeriesRecord { terms_used: self.terms_used, tail: self.tail_estimate, converged: self.converged }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub terms_used: usize,
    pub tail: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ordering {
    Lu,
    Ul,
}

/// The terms `(T_m, S_m)` for `m = 1, 2, ...`, unsigned.
pub struct SeriesTerms {
    m: SectionMatrix,
    t: Option<SectionMatrix>,
    s: Option<SectionMatrix>,
    ordering: Ordering,
}

impl SeriesTerms {
    pub fn new(a: &SectionMatrix) -> Self {
        Self::with_ordering(a, Ordering::Lu)
    }

    fn with_ordering(a: &SectionMatrix, ordering: Ordering) -> Self {
        SeriesTerms { m: a.shift(-ONE), t: None, s: None, ordering }
    }
}

impl Iterator for SeriesTerms {
    type Item = (SectionMatrix, SectionMatrix);

    fn next(&mut self) -> Option<Self::Item> {
        let m = &self.m;
        let (t, s) = match (&self.t, &self.s, self.ordering) {
            (Some(t), Some(s), Ordering::Lu) => {
                (t.matmul(m).ok()?.proj_lower(), m.matmul(s).ok()?.proj_strict_upper())
            }
            (Some(t), Some(s), Ordering::Ul) => {
                (m.matmul(t).ok()?.proj_lower(), s.matmul(m).ok()?.proj_strict_upper())
            }
            _ => (m.proj_lower(), m.proj_strict_upper()),
        };
        self.t = Some(t.clone());
        self.s = Some(s.clone());
        Some((t, s))
    }
}

fn check_contraction(a: &SectionMatrix) -> Result<()> {
    let dist = opnorm_estimate(a.shift(-ONE).as_dense(), OPNORM_ITERS, OPNORM_TOL);
    if dist >= 1.0 {
        return Err(Error::PreconditionViolated { what: "||A - I||_op < 1", value: dist });
    }
    Ok(())
}

fn run(a: &SectionMatrix, tol: f64, max_terms: usize, ordering: Ordering) -> Result<SeriesResult> {
    check_contraction(a)?;
    let partial = sum_terms(a, tol, max_terms, ordering);
    if !partial.converged {
        return Err(Error::NoConvergence { iterations: partial.terms_used, residual: partial.tail_estimate });
    }
    Ok(partial)
}

fn sum_terms(a: &SectionMatrix, tol: f64, max_terms: usize, ordering: Ordering) -> SeriesResult {
    let mut l_inv = SectionMatrix::identity(a.n());
    let mut u_inv = SectionMatrix::identity(a.n());
    let mut tail = 0.0;
    let mut used = 0;
    let mut converged = false;
    for (idx, (t, s)) in SeriesTerms::with_ordering(a, ordering).take(max_terms).enumerate() {
        let sign = if idx % 2 == 0 { -ONE } else { ONE };
        l_inv = l_inv.add(&t.scale(sign)).expect("same window");
        u_inv = u_inv.add(&s.scale(sign)).expect("same window");
        used = idx + 1;
        tail = t.max_abs().max(s.max_abs());
        if tail < tol {
            converged = true;
            break;
        }
    }
    SeriesResult { l_inv, u_inv, terms_used: used, tail_estimate: tail, converged }
}

/// Inverse LU factors by the projection series. Fails when the max-entry
/// norm of the newest term is still `>= tol` after `max_terms` terms.
pub fn series_lu_inverse(a: &SectionMatrix, tol: f64, max_terms: usize) -> Result<SeriesResult> {
    run(a, tol, max_terms, Ordering::Lu)
}

/// The first `terms` partial sums without convergence gating, for
/// inspecting truncated sums.
pub fn series_lu_truncated(a: &SectionMatrix, terms: usize) -> SeriesResult {
    sum_terms(a, 0.0, terms, Ordering::Lu)
}

/// Mirrored recursion `T_{m+1} = P[M T_m]`, `S_{m+1} = Q[S_m M]`.
///
/// The sums are the inverse factors of the UL factorization `A = U' L'`,
/// so `u_inv * a * l_inv = I`, with the diagonal in `L'`.
pub fn series_ul_inverse(a: &SectionMatrix, tol: f64, max_terms: usize) -> Result<SeriesResult> {
    run(a, tol, max_terms, Ordering::Ul)
}

/// Inverts the series output and moves the diagonal from `L` into `U`.
pub fn align_with_unit_diagonal(sr: &SeriesResult) -> Result<(SectionMatrix, SectionMatrix)> {
    if !sr.converged {
        return Err(Error::NoConvergence { iterations: sr.terms_used, residual: sr.tail_estimate });
    }
    let l = triangular_inverse(&sr.l_inv, Triangle::Lower)?;
    let u = triangular_inverse(&sr.u_inv, Triangle::Upper)?;
    let d = l.diag();
    if let Some(index) = d.iter().position(|x| *x == C64::new(0.0, 0.0)) {
        return Err(Error::ZeroDiagonal { index });
    }
    let dim = l.dim();
    let l_aligned = Dense::from_fn(dim, dim, |i, j| l[(i, j)] / d[j]);
    let u_aligned = Dense::from_fn(dim, dim, |i, j| d[i] * u[(i, j)]);
    Ok((
        SectionMatrix::from_dense(l_aligned)?.with_label("L"),
        SectionMatrix::from_dense(u_aligned)?.with_label("U"),
    ))
}

/// `alpha = 2 / (lambda_min + lambda_max)` from power-iteration estimates,
/// returning `(alpha, alpha A)` once `||I - alpha A||_op < 1` is confirmed.
pub fn spd_rescale(a: &SectionMatrix) -> Result<(f64, SectionMatrix)> {
    let asym = a.hermitian_defect();
    if asym > crate::factor::HERMITIAN_TOL * a.max_abs() {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    let bounds = hermitian_extreme_eigenvalues(a, RESCALE_ITERS)?;
    let alpha = 2.0 / (bounds.min + bounds.max);
    let scaled = a.scale(C64::new(alpha, 0.0));
    check_contraction(&scaled)?;
    Ok((alpha, scaled))
}

/// Cholesky factor through the series: rescale, sum, align, then
/// `C = L D^{1/2} / sqrt(alpha)` with `D = diag(U)`.
pub fn series_cholesky(a: &SectionMatrix, tol: f64, max_terms: usize) -> Result<FactorizationResult> {
    let (alpha, scaled) = spd_rescale(a)?;
    let sr = series_lu_inverse(&scaled, tol, max_terms)?;
    let (l, u) = align_with_unit_diagonal(&sr)?;
    let d = u.diag();
    if let Some(step) = d.iter().position(|x| x.re <= 0.0) {
        return Err(Error::NotPositiveDefinite { step: step + 1 });
    }
    let root: Vec<f64> = d.iter().map(|x| (x.re / alpha).sqrt()).collect();
    let dim = l.dim();
    let c = Dense::from_fn(dim, dim, |i, j| l[(i, j)] * root[j]);
    let c = SectionMatrix::from_dense(c)?.with_label("C");
    let cstar = c.adjoint().with_label("C*");
    FactorizationResult::new(FactorKind::Cholesky, a, c, cstar)
}

/// `[f_L(eps)]^{-1} A [f_U(1/eps)]^{-1}`, where `f_L(eps)` scales the m-th
/// lower diagonal of `l_ref` by `eps^m` and `f_U(1/eps)` scales the m-th
/// upper diagonal of `u_ref` by `eps^m`.
pub fn precondition_by_scaling(
    a: &SectionMatrix,
    l_ref: &SectionMatrix,
    u_ref: &SectionMatrix,
    eps: f64,
) -> Result<SectionMatrix> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0, 1), got {eps}")));
    }
    let fl = l_ref.diag_scale(C64::new(eps, 0.0))?;
    let fu = u_ref.diag_scale(C64::new(1.0 / eps, 0.0))?;
    let fl_inv = triangular_inverse(&fl, Triangle::Lower)?;
    let fu_inv = triangular_inverse(&fu, Triangle::Upper)?;
    fl_inv.matmul(a)?.matmul(&fu_inv)
}

/// Convenience: direct LU factors used as the reference pair for
/// [`precondition_by_scaling`].
pub fn reference_factors(a: &SectionMatrix) -> Result<(SectionMatrix, SectionMatrix)> {
    let r = lu_unpivoted(a, DEFAULT_PIVOT_TOL)?;
    Ok(r.factors)
}
