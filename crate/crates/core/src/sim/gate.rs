// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Unitary gates and the standard gate set.

use super::linalg::{self, CMat, C64, ONE, ZERO};
use super::pauli::Pauli;
use crate::{Error, Result};

/// Measurement or control basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl Basis {
    pub fn pauli(self) -> Pauli {
        match self {
            Basis::X => Pauli::X,
            Basis::Y => Pauli::Y,
            Basis::Z => Pauli::Z,
        }
    }

    /// Projector `(1 + s·P)/2` onto the eigenvalue `s` of this basis.
    pub fn projector(self, outcome: i8) -> CMat {
        let p = self.pauli().matrix();
        (linalg::identity(2) + p * C64::new(outcome as f64, 0.0)) * C64::new(0.5, 0.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryGate {
    pub targets: Vec<usize>,
    pub matrix: CMat,
}

impl UnitaryGate {
    /// Checks shape, distinct targets and unitarity to 1e-10.
    pub fn new(targets: Vec<usize>, matrix: CMat) -> Result<UnitaryGate> {
        let g = UnitaryGate::new_unchecked(targets, matrix)?;
        let err = linalg::unitarity_error(&g.matrix);
        if err > 1e-10 {
            return Err(Error::NotUnitary(err));
        }
        Ok(g)
    }

    /// Shape and target checks only.
    pub fn new_unchecked(targets: Vec<usize>, matrix: CMat) -> Result<UnitaryGate> {
        let dim = 1usize << targets.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: matrix.nrows() });
        }
        for (i, t) in targets.iter().enumerate() {
            if targets[..i].contains(t) {
                return Err(Error::DuplicateTarget(*t));
            }
        }
        Ok(UnitaryGate { targets, matrix })
    }

    pub fn arity(&self) -> usize {
        self.targets.len()
    }

    pub fn adjoint(&self) -> UnitaryGate {
        UnitaryGate { targets: self.targets.clone(), matrix: self.matrix.adjoint() }
    }

    /// Same matrix on relabelled qubits.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> UnitaryGate {
        UnitaryGate { targets: self.targets.iter().map(|&t| f(t)).collect(), matrix: self.matrix.clone() }
    }
}

fn one(q: usize, m: CMat) -> UnitaryGate {
    UnitaryGate { targets: vec![q], matrix: m }
}

pub fn x(q: usize) -> UnitaryGate {
    one(q, linalg::pauli_x())
}

pub fn y(q: usize) -> UnitaryGate {
    one(q, linalg::pauli_y())
}

pub fn z(q: usize) -> UnitaryGate {
    one(q, linalg::pauli_z())
}

pub fn h(q: usize) -> UnitaryGate {
    one(q, linalg::hadamard())
}

pub fn pauli(q: usize, p: Pauli) -> UnitaryGate {
    one(q, p.matrix())
}

pub fn cz(a: usize, b: usize) -> UnitaryGate {
    let mut m = CMat::identity(4, 4);
    m[(3, 3)] = -ONE;
    UnitaryGate { targets: vec![a, b], matrix: m }
}

pub fn cnot(control: usize, target: usize) -> UnitaryGate {
    controlled(&[(control, Basis::Z, -1)], target, Pauli::X)
}

pub fn toffoli(c1: usize, c2: usize, target: usize) -> UnitaryGate {
    controlled(&[(c1, Basis::Z, -1), (c2, Basis::Z, -1)], target, Pauli::X)
}

/// Pauli `op` on `target` when every control qubit is found in the
/// eigenstate `outcome` of its basis: `P ⊗ op + (1 − P) ⊗ 1` with `P` the
/// product of the control projectors. Outcome −1 in the Z basis is the usual
/// |1⟩ control. Target occupies the highest bit of the matrix index.
pub fn controlled(conditions: &[(usize, Basis, i8)], target: usize, op: Pauli) -> UnitaryGate {
    controlled_gate(conditions, &pauli(target, op))
}

/// `gate` applied when every condition holds. Controls take the low bits of
/// the matrix index, the gate's own targets the high bits.
pub fn controlled_gate(conditions: &[(usize, Basis, i8)], gate: &UnitaryGate) -> UnitaryGate {
    let mut proj = CMat::from_element(1, 1, ONE);
    for &(_, basis, outcome) in conditions {
        proj = linalg::kron(&basis.projector(outcome), &proj);
    }
    let dc = proj.nrows();
    let dt = gate.matrix.nrows();
    let m = linalg::kron(&gate.matrix, &proj) + linalg::kron(&linalg::identity(dt), &(CMat::identity(dc, dc) - proj));
    let mut targets: Vec<usize> = conditions.iter().map(|c| c.0).collect();
    targets.extend_from_slice(&gate.targets);
    UnitaryGate { targets, matrix: m }
}

/// Diagonal phase gate helper used by tests: `diag(1, e^{iθ})`.
pub fn phase(q: usize, theta: f64) -> UnitaryGate {
    let mut m = CMat::identity(2, 2);
    m[(1, 1)] = C64::from_polar(1.0, theta);
    m[(0, 1)] = ZERO;
    one(q, m)
}
