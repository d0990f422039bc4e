// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! The simulation layer on its own: gates, Pauli algebra, channels,
//! Gell-Mann unitaries and single-qubit process tomography.
//!
//!     cargo run --release --example simulator

use qcnn::sim::{gate, process_tomography_1q, DensityMatrix, GellMannBasis, KrausChannel, PauliString, StateVector};

fn main() -> qcnn::Result<()> {
    let mut psi = StateVector::zero(3);
    psi.apply(&gate::h(0))?;
    psi.apply(&gate::cnot(0, 1))?;
    psi.apply(&gate::cnot(1, 2))?;
    for s in ["ZZI", "IZZ", "XXX"] {
        println!("⟨{s}⟩ = {:+.3}", psi.expectation_string(&PauliString::parse(s)?).re);
    }

    let mut rho = DensityMatrix::from_pure(&psi);
    rho.apply_channel(&KrausChannel::pauli(1, 0.1, 0.0, 0.05)?)?;
    println!("purity after noise {:.4}", rho.purity());

    let basis = GellMannBasis::for_qubits(2)?;
    let u = basis.unitary(&[0.1; 15])?;
    println!("recovered coefficients {:.6?}", &basis.params_from_unitary(&u)?[..3]);

    let map = process_tomography_1q(|r: &DensityMatrix| {
        let mut out = r.clone();
        out.apply_channel(&KrausChannel::pauli(0, 0.05, 0.05, 0.05)?)?;
        Ok(out)
    })?;
    println!("depolarizing Bloch map diagonal {:.3?}", [map.m[(0, 0)], map.m[(1, 1)], map.m[(2, 2)]]);
    Ok(())
}
