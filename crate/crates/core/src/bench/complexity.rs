// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Minimum number of input copies needed to tell `p` from a threshold `p0`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exact::{build_exact_circuit, run_deferred};
use crate::spt::{cluster_ground_state, sop, ClusterParams};
use crate::train::Line;
use crate::{Error, Result};

/// Two-sided 95% normal quantile.
pub const CONFIDENCE_Z: f64 = 1.96;
/// Values above this are reported as infinite.
pub const M_MIN_CAP: f64 = 1e9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleComplexityQuery {
    pub p: f64,
    #[serde(default = "default_p0")]
    pub p0: f64,
}

fn default_p0() -> f64 {
    0.5
}

impl SampleComplexityQuery {
    pub fn new(p: f64) -> SampleComplexityQuery {
        SampleComplexityQuery { p, p0: default_p0() }
    }
}

/// `1.96² / (asin √p − asin √p0)²`, or `∞` once it exceeds [`M_MIN_CAP`].
pub fn sample_complexity(q: &SampleComplexityQuery) -> Result<f64> {
    for (name, v) in [("p", q.p), ("p0", q.p0)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidArgument(format!("{name} = {v} is outside [0, 1]")));
        }
    }
    if q.p == q.p0 {
        return Err(Error::InvalidArgument(format!("p equals the threshold {}", q.p0)));
    }
    let gap = q.p.sqrt().asin() - q.p0.sqrt().asin();
    let m = CONFIDENCE_Z * CONFIDENCE_Z / (gap * gap);
    Ok(if m > M_MIN_CAP { f64::INFINITY } else { m })
}

/// Success probability of a ±1 observable with expectation `e`.
pub fn probability_from_expectation(e: f64) -> f64 {
    ((e + 1.0) / 2.0).clamp(0.0, 1.0)
}

/// M_min for a ±1 observable against `p0 = 1/2`; infinite when `e = 0`.
pub fn m_min_from_expectation(e: f64) -> f64 {
    let p = probability_from_expectation(e);
    sample_complexity(&SampleComplexityQuery::new(p)).unwrap_or(f64::INFINITY)
}

/// Formats an M_min value, writing `∞` for infinity.
pub fn format_m_min(v: f64) -> String {
    if v.is_infinite() {
        "∞".into()
    } else {
        format!("{v}")
    }
}

/// String order parameter spanning `len` sites, centered. Even lengths are
/// shortened by one so both ends carry a `Z`.
pub fn centered_sop_bounds(n: usize, len: usize) -> Result<(usize, usize)> {
    let len = if len % 2 == 0 { len.saturating_sub(1) } else { len };
    if len < 3 || len > n {
        return Err(Error::InvalidArgument(format!("string length {len} does not fit in {n} sites")));
    }
    let a = (n - len) / 2;
    Ok((a, a + len - 1))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SopColumn {
    pub len: usize,
    pub expectation: f64,
    pub m_min: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexityRow {
    pub h1: f64,
    pub h2: f64,
    pub qcnn_expectation: f64,
    pub qcnn_m_min: f64,
    pub sops: Vec<SopColumn>,
    /// First SOP column's M_min over the QCNN's.
    pub ratio: f64,
    pub error: Option<String>,
}

impl ComplexityRow {
    fn failed(h1: f64, h2: f64, lens: &[usize], e: Error) -> ComplexityRow {
        ComplexityRow {
            h1,
            h2,
            qcnn_expectation: f64::NAN,
            qcnn_m_min: f64::NAN,
            sops: lens.iter().map(|&len| SopColumn { len, expectation: f64::NAN, m_min: f64::NAN }).collect(),
            ratio: f64::NAN,
            error: Some(e.to_string()),
        }
    }
}

/// QCNN against string order parameters along a line of ground states.
/// Failed points keep their row with the error text.
pub fn compare_complexity(n: usize, d: usize, line: &Line, points: usize, sop_lengths: &[usize], seed: u64) -> Result<Vec<ComplexityRow>> {
    if sop_lengths.is_empty() {
        return Err(Error::InvalidArgument("at least one string length is required".into()));
    }
    let circuit = build_exact_circuit(n, d)?;
    let strings = sop_lengths
        .iter()
        .map(|&len| {
            let (a, b) = centered_sop_bounds(n, len)?;
            Ok((b - a + 1, sop(a, b, n)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let lens: Vec<usize> = strings.iter().map(|s| s.0).collect();
    Ok(line
        .points(points)
        .into_par_iter()
        .map(|(h1, h2)| {
            let row = || -> Result<ComplexityRow> {
                let gs = cluster_ground_state(&ClusterParams::new(n, h1, h2), seed)?;
                let q = run_deferred(&gs.state, &circuit)?.expectation;
                let sops: Vec<SopColumn> = strings
                    .iter()
                    .map(|(len, s)| {
                        let e = gs.state.expectation_string(s).re;
                        SopColumn { len: *len, expectation: e, m_min: m_min_from_expectation(e) }
                    })
                    .collect();
                let qm = m_min_from_expectation(q);
                Ok(ComplexityRow { h1, h2, qcnn_expectation: q, qcnn_m_min: qm, ratio: sops[0].m_min / qm, sops, error: None })
            };
            row().unwrap_or_else(|e| ComplexityRow::failed(h1, h2, &lens, e))
        })
        .collect())
}
