// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;

use crate::exact::{build_exact_circuit, run_deferred};
use crate::spt::{cluster_ground_state, ClusterParams};
use crate::train::SweepRow;
use crate::Result;

/// Exact-circuit readout `⟨O⟩` on the ground state at every grid point,
/// in grid order. Per-point failures are kept in the row.
pub fn exact_sweep(n: usize, d: usize, grid: &[(f64, f64)], seed: u64) -> Result<Vec<SweepRow>> {
    let circuit = build_exact_circuit(n, d)?;
    Ok(grid
        .par_iter()
        .map(|&(h1, h2)| {
            let r = cluster_ground_state(&ClusterParams::new(n, h1, h2), seed).and_then(|gs| run_deferred(&gs.state, &circuit));
            match r {
                Ok(o) => SweepRow { h1, h2, output: Some(o.expectation), error: None },
                Err(e) => SweepRow { h1, h2, output: None, error: Some(e.to_string()) },
            }
        })
        .collect())
}
