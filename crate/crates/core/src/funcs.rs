// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

//! Matrix exponential, Hermitian square root, and the contour integral
//! `f(A) = (1 / 2 pi i) int f(lambda) (lambda I - A)^{-1} d lambda` on circles.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{cholesky_dense, hermitian_part, FactorKind, FactorizationResult, HERMITIAN_TOL};
use crate::matrix::{opnorm_estimate, Dense, SectionMatrix, C64, ONE};

pub const DEFAULT_SQRT_TOL: f64 = 1e-12;
pub const DEFAULT_SQRT_ITERS: usize = 100;
/// The spectrum gate requires `||A - c I|| < CONTOUR_MARGIN * radius`.
pub const CONTOUR_MARGIN: f64 = 0.95;

const OPNORM_ITERS: usize = 1000;
const OPNORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub center: C64,
    pub radius: f64,
    pub points: usize,
}

impl Contour {
    pub fn new(center: C64, radius: f64, points: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!("contour radius must be positive, got {radius}")));
        }
        if points < 8 || !points.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!("contour needs an even number >= 8 of nodes, got {points}")));
        }
        Ok(Contour { center, radius, points })
    }

    pub fn nodes(&self) -> impl Iterator<Item = (C64, C64)> + '_ {
        (0..self.points).map(move |t| {
            let e = C64::from_polar(1.0, 2.0 * PI * t as f64 / self.points as f64);
            (self.center + e * self.radius, e)
        })
    }
}

/// Circle centered at `trace(A) / dim` with radius `1.25 ||A - c I||`.
pub fn default_contour(a: &SectionMatrix, points: usize) -> Result<Contour> {
    let center = a.diag().iter().sum::<C64>() / a.dim() as f64;
    let spread = opnorm_estimate(a.shift(-center).as_dense(), OPNORM_ITERS, OPNORM_TOL);
    // a scalar multiple of the identity still needs a circle of positive radius
    let radius = if spread > 0.0 { 1.25 * spread } else { 1.0 };
    Contour::new(center, radius, points)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarFunction {
    One,
    Identity,
    Exp,
    Inverse,
    SqrtPrincipal,
}

impl ScalarFunction {
    pub const ALL: [ScalarFunction; 5] = [
        ScalarFunction::One,
        ScalarFunction::Identity,
        ScalarFunction::Exp,
        ScalarFunction::Inverse,
        ScalarFunction::SqrtPrincipal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScalarFunction::One => "one",
            ScalarFunction::Identity => "identity",
            ScalarFunction::Exp => "exp",
            ScalarFunction::Inverse => "inverse",
            ScalarFunction::SqrtPrincipal => "sqrt_principal",
        }
    }

    pub fn eval(self, z: C64) -> C64 {
        match self {
            ScalarFunction::One => ONE,
            ScalarFunction::Identity => z,
            ScalarFunction::Exp => z.exp(),
            ScalarFunction::Inverse => z.inv(),
            ScalarFunction::SqrtPrincipal => z.sqrt(),
        }
    }
}

impl fmt::Display for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScalarFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown function {s:?}")))
    }
}

/// Scaling and squaring around a Taylor core. The scaled matrix has
/// infinity norm at most 1/2; Taylor terms are summed until the newest
/// term has max-entry norm below 1e-16.
pub fn expm(a: &SectionMatrix) -> SectionMatrix {
    let norm = a.norm_inf();
    let mut squarings = 0u32;
    while norm / 2f64.powi(squarings as i32) > 0.5 {
        squarings += 1;
    }
    let scaled = a.scale(C64::new(2f64.powi(-(squarings as i32)), 0.0));
    let mut sum = SectionMatrix::identity(a.n());
    let mut term = SectionMatrix::identity(a.n());
    for k in 1..=200 {
        term = term.matmul(&scaled).expect("same window").scale(C64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term).expect("same window");
        if term.max_abs() < 1e-16 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum).expect("same window");
    }
    sum.with_label("expm")
}

fn check_hpd(a: &Dense) -> Result<()> {
    let asym = a.hermitian_defect();
    if asym > HERMITIAN_TOL * a.max_abs() {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    cholesky_dense(a).map(|_| ())
}

/// Principal square root of a Hermitian positive definite section by the
/// coupled Newton iteration, stopped when `max|Y^2 - A| <= tol max|A|`.
pub fn sqrtm_hpd(a: &SectionMatrix, tol: f64, max_iter: usize) -> Result<SectionMatrix> {
    check_hpd(a)?;
    let target = tol * a.max_abs();
    let mut y = a.as_dense().clone();
    let mut z = Dense::identity(a.dim());
    let half = C64::new(0.5, 0.0);
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let y_inv = y.inverse()?;
        let z_inv = z.inverse()?;
        y = y.add(&z_inv)?.scale(half);
        z = z.add(&y_inv)?.scale(half);
        let yh = hermitian_part(&y);
        residual = yh.matmul(&yh)?.max_abs_diff(a)?;
        if residual <= target {
            return Ok(SectionMatrix::from_dense(yh)?.with_label("sqrtm"));
        }
    }
    Err(Error::NoConvergence { iterations: max_iter, residual })
}

/// Trapezoidal rule for the Cauchy integral on a circle. Node solves run in
/// parallel and are summed in node order.
pub fn riesz_dunford(a: &SectionMatrix, f: impl Fn(C64) -> C64 + Sync, contour: &Contour) -> Result<SectionMatrix> {
    let spread = opnorm_estimate(a.shift(-contour.center).as_dense(), OPNORM_ITERS, OPNORM_TOL);
    if spread >= CONTOUR_MARGIN * contour.radius {
        return Err(Error::PreconditionViolated { what: "||A - c I|| < 0.95 * contour radius", value: spread });
    }
    let nodes: Vec<(C64, C64)> = contour.nodes().collect();
    let parts: Vec<Result<Dense>> = nodes
        .par_iter()
        .map(|&(lambda, e)| {
            let resolvent = a.scale(-ONE).shift(lambda).as_dense().inverse()?;
            Ok(resolvent.scale(f(lambda) * e * contour.radius))
        })
        .collect();
    let mut sum = Dense::zeros(a.dim(), a.dim());
    for part in parts {
        sum = sum.add(&part?)?;
    }
    let b = sum.scale(C64::new(1.0 / contour.points as f64, 0.0));
    Ok(SectionMatrix::from_dense(b)?.with_label("riesz_dunford"))
}

/// Registry entry point for [`riesz_dunford`].
pub fn riesz_dunford_named(a: &SectionMatrix, f: ScalarFunction, contour: &Contour) -> Result<SectionMatrix> {
    riesz_dunford(a, move |z| f.eval(z), contour)
}

/// Right polar factorization `A = U P` with `P = (A* A)^{1/2}` from
/// [`sqrtm_hpd`] and `U = A P^{-1}`.
pub fn polar_via_sqrt(a: &SectionMatrix) -> Result<FactorizationResult> {
    let gram = SectionMatrix::from_dense(hermitian_part(a.adjoint().matmul(a)?.as_dense()))?;
    let p = sqrtm_hpd(&gram, DEFAULT_SQRT_TOL, DEFAULT_SQRT_ITERS)?.with_label("P");
    let u = a.matmul(&p.inverse()?)?.with_label("U");
    FactorizationResult::new(FactorKind::PolarRight, a, u, p)
}
