// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Two-layer encoder/decoder and the full nine-qubit density-matrix route.
//!
//! Physical qubits `3b, 3b+1, 3b+2` form block `b`; the middle one carries
//! data and its neighbours are ancillas. The outer layer acts on the block
//! data qubits 1, 4, 7 and the logical qubit ends up on qubit 4.

use serde::{Deserialize, Serialize};

use super::error_model::{ErrorModel, NUM_PHYSICAL};
use crate::sim::linalg::{self, CMat, C64};
use crate::sim::{gate, DensityMatrix, GellMannBasis, ParamVector, StateVector, UnitaryGate};
use crate::{Error, Result};

pub const BLOCKS: [[usize; 3]; 3] = [[0, 1, 2], [3, 4, 5], [6, 7, 8]];
pub const OUTER: [usize; 3] = [1, 4, 7];
pub const LOGICAL: usize = 4;

/// Variational code: 63 Gell-Mann coefficients per three-qubit decoder unitary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncoderDecoder {
    pub u1: ParamVector,
    pub u2: ParamVector,
}

impl EncoderDecoder {
    pub fn new(u1: ParamVector, u2: ParamVector) -> Result<EncoderDecoder> {
        for p in [&u1, &u2] {
            if p.dim != 8 || p.len() != 63 {
                return Err(Error::DimensionMismatch { expected: 63, got: p.len() });
            }
        }
        Ok(EncoderDecoder { u1, u2 })
    }

    pub fn identity() -> EncoderDecoder {
        EncoderDecoder { u1: ParamVector::zeros(8), u2: ParamVector::zeros(8) }
    }

    pub fn unitaries(&self) -> Result<CodeUnitaries> {
        let b = GellMannBasis::new(8)?;
        Ok(CodeUnitaries { u1: b.unitary(&self.u1.coefficients)?, u2: b.unitary(&self.u2.coefficients)? })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<EncoderDecoder> {
        let e: EncoderDecoder = serde_json::from_str(s)?;
        EncoderDecoder::new(ParamVector::new(e.u1.dim, e.u1.coefficients)?, ParamVector::new(e.u2.dim, e.u2.coefficients)?)
    }
}

/// Decoder unitaries in matrix form; encoders are their adjoints.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeUnitaries {
    pub u1: CMat,
    pub u2: CMat,
}

impl CodeUnitaries {
    pub fn identity() -> CodeUnitaries {
        CodeUnitaries { u1: linalg::identity(8), u2: linalg::identity(8) }
    }

    /// Nested repetition code equal to Shor's nine-qubit code. The inner
    /// decoder copies the data parity onto both ancillas and flips the data
    /// back when both report a flip; the outer one does the same after
    /// Hadamards, so it corrects phase flips of whole blocks.
    pub fn shor() -> CodeUnitaries {
        let u1 = circuit_matrix(3, &[gate::cnot(1, 0), gate::cnot(1, 2), gate::toffoli(0, 2, 1)]);
        let h3 = circuit_matrix(3, &[gate::h(0), gate::h(1), gate::h(2)]);
        let u2 = &u1 * h3;
        CodeUnitaries { u1, u2 }
    }
}

/// Dense matrix of a gate sequence (first gate acts first).
pub fn circuit_matrix(num_qubits: usize, gates: &[UnitaryGate]) -> CMat {
    let dim = 1usize << num_qubits;
    let mut m = CMat::zeros(dim, dim);
    for col in 0..dim {
        let mut s = StateVector::basis(num_qubits, col);
        for g in gates {
            s.apply(g).expect("gate targets fit the register");
        }
        for (row, a) in s.amplitudes().iter().enumerate() {
            m[(row, col)] = *a;
        }
    }
    m
}

/// Inverse decoder on a pure logical qubit; returns the nine-qubit state.
pub fn encode(logical: &StateVector, code: &CodeUnitaries) -> Result<DensityMatrix> {
    if logical.num_qubits() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: logical.num_qubits() });
    }
    let mut amps = vec![C64::new(0.0, 0.0); 1 << NUM_PHYSICAL];
    amps[0] = logical.amplitudes()[0];
    amps[1 << LOGICAL] = logical.amplitudes()[1];
    let mut s = StateVector::from_amplitudes(amps)?;
    s.apply_matrix(&OUTER, &code.u2.adjoint())?;
    let u1d = code.u1.adjoint();
    for blk in BLOCKS {
        s.apply_matrix(&blk, &u1d)?;
    }
    Ok(DensityMatrix::from_pure(&s))
}

pub fn apply_noise(rho: &DensityMatrix, em: &ErrorModel) -> Result<DensityMatrix> {
    em.validate()?;
    let mut out = rho.clone();
    let qubits: Vec<usize> = (0..rho.num_qubits()).collect();
    let pairs: Vec<(usize, usize)> = em.pairs.iter().copied().filter(|(a, b)| *a.max(b) < rho.num_qubits()).collect();
    em.apply(&mut out, &qubits, &pairs)?;
    Ok(out)
}

/// Decoder: inner unitaries, drop the ancillas, outer unitary, keep the logical qubit.
pub fn decode(rho: &DensityMatrix, code: &CodeUnitaries) -> Result<DensityMatrix> {
    if rho.num_qubits() != NUM_PHYSICAL {
        return Err(Error::DimensionMismatch { expected: NUM_PHYSICAL, got: rho.num_qubits() });
    }
    let mut r = rho.clone();
    for blk in BLOCKS {
        r.apply_matrix(&blk, &code.u1)?;
    }
    let mut outer = r.partial_trace(&OUTER)?;
    outer.apply_matrix(&[0, 1, 2], &code.u2)?;
    outer.partial_trace(&[1])
}

/// The six Pauli eigenstates |±x⟩, |±y⟩, |±z⟩.
pub fn six_states() -> [StateVector; 6] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v = |a: C64, b: C64| StateVector::from_amplitudes(vec![a, b]).expect("unit vector");
    let r = |x: f64| C64::new(x, 0.0);
    [
        v(r(s), r(s)),
        v(r(s), r(-s)),
        v(r(s), C64::new(0.0, s)),
        v(r(s), C64::new(0.0, -s)),
        v(r(1.0), r(0.0)),
        v(r(0.0), r(1.0)),
    ]
}

/// Six overlaps through the full nine-qubit pipeline.
pub fn overlaps_full(code: &CodeUnitaries, em: &ErrorModel) -> Result<[f64; 6]> {
    let mut out = [0.0; 6];
    for (o, psi) in out.iter_mut().zip(six_states().iter()) {
        let rho = decode(&apply_noise(&encode(psi, code)?, em)?, code)?;
        *o = rho.fidelity_pure(psi);
    }
    Ok(out)
}

pub fn fidelity_full(code: &CodeUnitaries, em: &ErrorModel) -> Result<f64> {
    Ok(overlaps_full(code, em)?.iter().sum::<f64>() / 6.0)
}
