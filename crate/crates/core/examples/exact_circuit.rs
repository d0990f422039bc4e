// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Builds the fixed QCNN, checks the fixed-point and error-correction
//! properties, and samples it shot by shot.
//!
//!     cargo run --release --example exact_circuit

use qcnn::exact::{build_exact_circuit, run_deferred, run_trajectories, verify_construction_criteria};
use qcnn::sim::{Pauli, PauliKey};
use qcnn::spt::cluster_state;
use rand::SeedableRng;

fn main() -> qcnn::Result<()> {
    let circuit = build_exact_circuit(9, 1)?;
    println!("{}", circuit.dump());
    println!("per unit: {:?}", circuit.counts_per_unit());

    let report = verify_construction_criteria(&circuit, 9, 1)?;
    println!("fixed point: {}", report.fixed_point.detail);
    for c in &report.qec {
        println!("  {} (fewest −1 outcomes: {:?})", c.detail, c.min_flagged);
    }

    let mut psi = cluster_state(9);
    psi.apply_pauli(&PauliKey::single(4, Pauli::X));
    let exact = run_deferred(&psi, &circuit)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let sampled = run_trajectories(&psi, &circuit, 2000, &mut rng)?;
    println!(
        "X on qubit 4: deferred {:.6}, 2000 shots {:.4} ± {:.4}",
        exact.expectation, sampled.expectation, sampled.std_error
    );
    Ok(())
}
