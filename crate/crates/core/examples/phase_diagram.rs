// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! The exact circuit against the string order parameter along h2 = 0, and
//! a small grid over the (h1, h2) plane.
//!
//!     cargo run --release --example phase_diagram

use qcnn::bench::exact_sweep;
use qcnn::spt::{central_sop, cluster_ground_state, ClusterParams};
use qcnn::train::grid;

fn main() -> qcnn::Result<()> {
    let n = 12;
    let s = central_sop(n)?;
    let rows = exact_sweep(n, 1, &grid((0.0, 2.0, 11), (0.0, 0.0, 1)), 0)?;
    println!("  h1    QCNN    SOP");
    for r in &rows {
        let gs = cluster_ground_state(&ClusterParams::new(n, r.h1, r.h2), 0)?;
        println!("{:5.2}  {:6.3}  {:6.3}", r.h1, r.output.unwrap_or(f64::NAN), gs.state.expectation_string(&s).re);
    }

    println!("\nQCNN output over the plane:");
    for r in exact_sweep(9, 1, &grid((0.0, 1.6, 5), (-0.5, 0.5, 3)), 0)? {
        println!("h1 = {:4.2}, h2 = {:+4.2}: {:.3}", r.h1, r.h2, r.output.unwrap_or(f64::NAN));
    }
    Ok(())
}
