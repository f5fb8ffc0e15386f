// Copyright 2026 The locfact Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matrix::SectionMatrix;

/// Per-offset maxima `d[m] = max_{|j-k| = m} |a_jk|` over an interior window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    pub values: Vec<f64>,
    pub probe_margin: usize,
}

impl DecayProfile {
    /// Profile of a plain sequence, e.g. symbol coefficients `|c_m|`.
    pub fn from_sequence(values: Vec<f64>) -> Self {
        DecayProfile { values, probe_margin: 0 }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Rows `offset,value` with a header line.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("offset,value\n");
        for (m, v) in self.values.iter().enumerate() {
            writeln!(s, "{m},{v:e}").expect("writing to a String");
        }
        s
    }
}

/// Decay profile of the central section with `probe_margin` boundary rows removed.
pub fn profile(a: &SectionMatrix, probe_margin: usize) -> Result<DecayProfile> {
    if probe_margin >= a.n() && a.n() > 0 {
        return Err(crate::Error::InvalidParameter(format!(
            "probe margin {probe_margin} must be below n = {}",
            a.n()
        )));
    }
    let inner = a.interior(probe_margin)?;
    let d = inner.dim();
    let mut values = vec![0.0f64; d];
    for i in 0..d {
        for (j, z) in inner.row(i).iter().enumerate() {
            let m = i.abs_diff(j);
            values[m] = values[m].max(z.norm());
        }
    }
    Ok(DecayProfile { values, probe_margin })
}
