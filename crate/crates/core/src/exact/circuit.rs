// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Gate/measurement programs with classical control.

use std::fmt::Write as _;

use serde::Serialize;

use crate::sim::{Basis, UnitaryGate};
use crate::{Error, Result};

/// Tag used for gate tallies and the text dump.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GateKind {
    /// Controlled phase between two qubits.
    Cz,
    /// Z on the target when the control reads X = −1.
    CxZ,
    /// X on the target when both controls read X = −1.
    Toffoli,
    /// Gates of the final fully connected layer.
    Final,
    /// Variational unitaries.
    Trainable,
}

impl GateKind {
    pub fn label(self) -> &'static str {
        match self {
            GateKind::Cz => "CZ",
            GateKind::CxZ => "CxZ",
            GateKind::Toffoli => "CxCxX",
            GateKind::Final => "F",
            GateKind::Trainable => "U",
        }
    }
}

/// Layer boundaries carried through execution.
#[derive(Clone, Debug, PartialEq)]
pub enum Marker {
    /// Start of convolution-pooling unit `depth` (1-based) on `active` qubits.
    Unit { depth: usize, active: Vec<usize> },
    /// Start of the fully connected layer.
    Final { active: Vec<usize> },
}

#[derive(Clone, Debug)]
pub enum Element {
    Gate { kind: GateKind, gate: UnitaryGate },
    /// Mid-circuit measurement. Measurements are numbered in program order.
    Measure { qubit: usize, basis: Basis },
    /// `gate` fires when measurement `id` gave `outcome` for every listed pair.
    Conditional { kind: GateKind, conditions: Vec<(usize, i8)>, gate: UnitaryGate },
    /// Projection onto one outcome; the qubit stays in the register.
    Postselect { qubit: usize, basis: Basis, outcome: i8 },
    Marker(Marker),
}

/// Final observation: the Pauli of `basis` on `qubit`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Readout {
    pub qubit: usize,
    pub basis: Basis,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GateCounts {
    pub cz_type: usize,
    pub toffoli: usize,
    pub conditional: usize,
    pub final_layer: usize,
    pub trainable: usize,
    pub measurements: usize,
}

#[derive(Clone, Debug)]
pub struct CircuitDescription {
    pub num_qubits: usize,
    pub elements: Vec<Element>,
    pub readout: Readout,
}

impl CircuitDescription {
    /// Checks the structural invariants: targets in range, classical controls
    /// pointing at earlier measurements, and no operation on a qubit after it
    /// has been measured.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_qubits;
        let mut measured = vec![false; n];
        let mut num_meas = 0;
        let live = |q: usize, measured: &[bool], what: &str| -> Result<()> {
            if q >= n {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits: n });
            }
            if measured[q] {
                return Err(Error::InvalidArgument(format!("{what} acts on qubit {q} after it was measured")));
            }
            Ok(())
        };
        for (pos, e) in self.elements.iter().enumerate() {
            match e {
                Element::Gate { gate, .. } => {
                    for &t in &gate.targets {
                        live(t, &measured, &format!("gate at element {pos}"))?;
                    }
                }
                Element::Measure { qubit, .. } => {
                    live(*qubit, &measured, &format!("measurement at element {pos}"))?;
                    measured[*qubit] = true;
                    num_meas += 1;
                }
                Element::Conditional { conditions, gate, .. } => {
                    for &(id, o) in conditions {
                        if id >= num_meas {
                            return Err(Error::InvalidArgument(format!(
                                "conditional at element {pos} reads measurement {id}, only {num_meas} precede it"
                            )));
                        }
                        if o != 1 && o != -1 {
                            return Err(Error::InvalidArgument(format!("outcome must be ±1, got {o}")));
                        }
                    }
                    for &t in &gate.targets {
                        live(t, &measured, &format!("conditional at element {pos}"))?;
                    }
                }
                Element::Postselect { qubit, .. } => live(*qubit, &measured, &format!("postselection at element {pos}"))?,
                Element::Marker(_) => {}
            }
        }
        live(self.readout.qubit, &measured, "readout")
    }

    /// `(qubit, basis)` of every measurement in program order.
    pub fn measurements(&self) -> Vec<(usize, Basis)> {
        self.elements
            .iter()
            .filter_map(|e| match e {
                Element::Measure { qubit, basis } => Some((*qubit, *basis)),
                _ => None,
            })
            .collect()
    }

    pub fn num_units(&self) -> usize {
        self.elements.iter().filter(|e| matches!(e, Element::Marker(Marker::Unit { .. }))).count()
    }

    pub fn counts(&self) -> GateCounts {
        tally(&self.elements)
    }

    /// Tallies per convolution-pooling unit, the final layer excluded.
    pub fn counts_per_unit(&self) -> Vec<GateCounts> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, e) in self.elements.iter().enumerate() {
            if let Element::Marker(m) = e {
                if let Some(s) = start {
                    out.push(tally(&self.elements[s..i]));
                }
                start = matches!(m, Marker::Unit { .. }).then_some(i);
            }
        }
        if let Some(s) = start {
            out.push(tally(&self.elements[s..]));
        }
        out
    }

    /// Human-readable listing, one element per line.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "circuit on {} qubits", self.num_qubits);
        let mut meas = 0;
        for e in &self.elements {
            let _ = match e {
                Element::Gate { kind, gate } => writeln!(s, "  {:<6} {:?}", kind.label(), gate.targets),
                Element::Measure { qubit, basis } => {
                    meas += 1;
                    writeln!(s, "  M{:<5} q{} {:?}", meas - 1, qubit, basis)
                }
                Element::Conditional { kind, conditions, gate } => {
                    let c: Vec<String> = conditions.iter().map(|(id, o)| format!("M{id}={o:+}")).collect();
                    writeln!(s, "  if {} then {} {:?}", c.join(" & "), kind.label(), gate.targets)
                }
                Element::Postselect { qubit, basis, outcome } => writeln!(s, "  post   q{qubit} {basis:?}={outcome:+}"),
                Element::Marker(Marker::Unit { depth, active }) => writeln!(s, "unit {depth} on {} qubits {:?}", active.len(), active),
                Element::Marker(Marker::Final { active }) => writeln!(s, "final layer on {:?}", active),
            };
        }
        let _ = writeln!(s, "readout {:?} on q{}", self.readout.basis, self.readout.qubit);
        s
    }
}

fn tally(elements: &[Element]) -> GateCounts {
    let mut c = GateCounts::default();
    for e in elements {
        match e {
            Element::Gate { kind, .. } => match kind {
                GateKind::Cz | GateKind::CxZ => c.cz_type += 1,
                GateKind::Toffoli => c.toffoli += 1,
                GateKind::Final => c.final_layer += 1,
                GateKind::Trainable => c.trainable += 1,
            },
            Element::Conditional { .. } => c.conditional += 1,
            Element::Measure { .. } => c.measurements += 1,
            _ => {}
        }
    }
    c
}
