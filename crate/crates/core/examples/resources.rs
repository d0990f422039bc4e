// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Multi-qubit operation counts for the exact circuit.
//!
//!     cargo run --release --example resources

use qcnn::bench::resource_count;

fn main() -> qcnn::Result<()> {
    for (n, d) in [(9, 1), (27, 2), (81, 3), (99, 4)] {
        let r = resource_count(n, d)?;
        println!("N = {n:3}, d = {d}: {:8.2} multi-qubit ops, single-qubit depth {}", r.multi_qubit_ops, r.single_qubit_depth);
        for l in &r.layers {
            println!("    layer {}: {:.2} CzZ, {:.2} CxCxX, {:.2} CxZ", l.k, l.czz, l.cxcxx, l.cxz);
        }
        println!("    final: {:.2} CzZ", r.final_czz);
    }
    Ok(())
}
