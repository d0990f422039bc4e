// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Lanczos ground states of the cluster-Ising chain and the spin-1 Haldane
//! chain, with their string order parameters.
//!
//!     cargo run --release --example ground_states

use qcnn::spt::{central_sop, cluster_ground_state, haldane_ground_state, spin1_embed, ClusterParams, HaldaneParams, DEFAULT_DIM_CAP};

fn main() -> qcnn::Result<()> {
    let s = central_sop(14)?;
    println!("string {}", s.letters());
    for h1 in [0.0, 0.5, 1.0, 1.5] {
        let gs = cluster_ground_state(&ClusterParams::new(14, h1, 0.0), 0)?;
        println!(
            "h1 = {h1}: E = {:.6}, residual {:.1e}, {} products, ⟨S⟩ = {:.4}",
            gs.energy,
            gs.residual,
            gs.matvecs,
            gs.state.expectation_string(&s).re
        );
    }
    let (e, psi) = haldane_ground_state(&HaldaneParams { j: 1.0, omega: 0.0, n: 6 }, DEFAULT_DIM_CAP, 0)?;
    let q = spin1_embed(&psi, 6)?;
    println!("Haldane chain, 6 sites: E = {e:.6}, embedded into {} qubits", q.num_qubits());
    Ok(())
}
