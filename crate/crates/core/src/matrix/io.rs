// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

//! Matrix file format: `{"n": int, "re": [[...]], "im": [[...]]}` with
//! row-major `(2n+1) x (2n+1)` arrays; `"im"` is omitted for real matrices.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Dense, SectionMatrix, SymbolSeries, C64};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl From<&SectionMatrix> for MatrixFile {
    fn from(a: &SectionMatrix) -> Self {
        let d = a.dim();
        let re = (0..d).map(|i| a.row(i).iter().map(|z| z.re).collect()).collect();
        let im = if a.as_slice().iter().all(|z| z.im == 0.0) {
            None
        } else {
            Some((0..d).map(|i| a.row(i).iter().map(|z| z.im).collect()).collect())
        };
        MatrixFile { n: a.n(), re, im }
    }
}

impl TryFrom<&MatrixFile> for SectionMatrix {
    type Error = Error;

    fn try_from(f: &MatrixFile) -> Result<Self> {
        let d = 2 * f.n + 1;
        let check = |rows: &Vec<Vec<f64>>| -> Result<()> {
            if rows.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: rows.len() });
            }
            if let Some(r) = rows.iter().find(|r| r.len() != d) {
                return Err(Error::DimensionMismatch { expected: d, found: r.len() });
            }
            Ok(())
        };
        check(&f.re)?;
        if let Some(im) = &f.im {
            check(im)?;
        }
        let mut data = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let im = f.im.as_ref().map_or(0.0, |m| m[i][j]);
                data.push(C64::new(f.re[i][j], im));
            }
        }
        SectionMatrix::from_dense(Dense::from_vec(d, d, data)?)
    }
}

pub fn matrix_to_string(a: &SectionMatrix) -> Result<String> {
    Ok(serde_json::to_string(&MatrixFile::from(a))?)
}

pub fn matrix_from_str(s: &str) -> Result<SectionMatrix> {
    let f: MatrixFile = serde_json::from_str(s)?;
    SectionMatrix::try_from(&f)
}

pub fn write_matrix(path: impl AsRef<Path>, a: &SectionMatrix) -> Result<()> {
    fs::write(path, matrix_to_string(a)?)?;
    Ok(())
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<SectionMatrix> {
    matrix_from_str(&fs::read_to_string(path)?)
}

pub fn write_symbol(path: impl AsRef<Path>, s: &SymbolSeries) -> Result<()> {
    fs::write(path, serde_json::to_string(s)?)?;
    Ok(())
}

pub fn read_symbol(path: impl AsRef<Path>) -> Result<SymbolSeries> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}
