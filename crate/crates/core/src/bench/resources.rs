// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Multi-qubit operation counts for the exact circuit on a Rydberg-style
//! native gate set.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerCount {
    /// Layer index `k`, acting on `N / 3^k` qubits' worth of operations.
    pub k: usize,
    pub czz: f64,
    pub cxcxx: f64,
    pub cxz: f64,
}

impl LayerCount {
    pub fn total(&self) -> f64 {
        self.czz + self.cxcxx + self.cxz
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourceCount {
    pub n: usize,
    pub d: usize,
    pub multi_qubit_ops: f64,
    pub single_qubit_depth: usize,
    pub layers: Vec<LayerCount>,
    pub final_czz: f64,
}

impl ResourceCount {
    pub fn breakdown_total(&self) -> f64 {
        self.layers.iter().map(LayerCount::total).sum::<f64>() + self.final_czz
    }
}

/// `(7N/2)(1 − 3^{1−d}) + N·3^{1−d}` with its layer-by-layer breakdown.
/// Counts are real-valued when `N` is not a multiple of `3^d`.
pub fn resource_count(n: usize, d: usize) -> Result<ResourceCount> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidArgument(format!("N and d must be at least 1, got N={n}, d={d}")));
    }
    let nf = n as f64;
    let tail = nf * 3f64.powi(1 - d as i32);
    let layers = (1..d)
        .map(|k| {
            let w = nf / 3f64.powi(k as i32);
            LayerCount { k, czz: 4.0 * w, cxcxx: w, cxz: 2.0 * w }
        })
        .collect();
    Ok(ResourceCount {
        n,
        d,
        multi_qubit_ops: 3.5 * nf * (1.0 - 3f64.powi(1 - d as i32)) + tail,
        single_qubit_depth: 4 * d,
        layers,
        final_czz: tail,
    })
}
