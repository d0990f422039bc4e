// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Expands the exact circuit's readout into a sum of Pauli strings and
//! compares it with direct simulation.
//!
//!     cargo run --release --example multiscale_sop

use qcnn::exact::{build_exact_circuit, run_deferred};
use qcnn::heisenberg::{multiscale_sop, truncate};
use qcnn::sim::StateVector;
use rand::SeedableRng;

fn main() -> qcnn::Result<()> {
    let o = multiscale_sop(9, 1)?;
    println!("N=9, d=1: {} terms, squared norm {}", o.operator.len(), o.operator.two_norm_sqr());
    for (p, c, exact) in o.csv_rows() {
        println!("  {p}  {c:+.4}  ({exact})");
    }

    let deep = multiscale_sop(27, 2)?;
    println!("N=27, d=2: term counts per scale {:?}", deep.term_counts);
    let t = truncate(&deep.to_pauli_sum(), 1e-3)?;
    println!("dropping |c| < 1e-3 removes {} terms with summed |c| of {:.3}", t.dropped_terms, t.dropped_weight);

    let circuit = build_exact_circuit(9, 1)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for _ in 0..3 {
        let s = StateVector::random(9, &mut rng);
        println!("random state: ⟨O⟩ = {:+.12}, circuit = {:+.12}", o.expectation(&s)?, run_deferred(&s, &circuit)?.expectation);
    }
    Ok(())
}
