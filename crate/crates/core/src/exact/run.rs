// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Executing circuit descriptions on state vectors.
//!
//! Deferred mode keeps every qubit and replaces classical control by coherent
//! control in the measured basis. Trajectory mode samples each measurement and
//! drops the measured qubit from the register.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::circuit::{CircuitDescription, Element, Marker};
use crate::sim::gate::controlled_gate;
use crate::sim::{Basis, PauliKey, StateVector, UnitaryGate};
use crate::spt::DEFAULT_DIM_CAP;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QcnnOutput {
    /// Readout expectation in [−1, 1].
    pub expectation: f64,
    /// `(1 + expectation) / 2`.
    pub probability_in_phase: f64,
    /// Accepted shots in trajectory mode, 0 for exact evaluation.
    pub shots_used: usize,
    /// Standard error of the mean; 0 for exact evaluation.
    pub std_error: f64,
}

impl QcnnOutput {
    pub fn exact(expectation: f64) -> QcnnOutput {
        let e = expectation.clamp(-1.0, 1.0);
        QcnnOutput { expectation: e, probability_in_phase: (1.0 + e) / 2.0, shots_used: 0, std_error: 0.0 }
    }
}

fn check_input(state: &StateVector, circuit: &CircuitDescription, cap: usize) -> Result<()> {
    if state.num_qubits() != circuit.num_qubits {
        return Err(Error::DimensionMismatch { expected: circuit.num_qubits, got: state.num_qubits() });
    }
    if state.dim() > cap {
        return Err(Error::CapExceeded { dim: state.dim(), cap });
    }
    Ok(())
}

/// Exact readout expectation with measurements deferred to the end.
pub fn run_deferred(state: &StateVector, circuit: &CircuitDescription) -> Result<QcnnOutput> {
    run_deferred_capped(state, circuit, DEFAULT_DIM_CAP)
}

pub fn run_deferred_capped(state: &StateVector, circuit: &CircuitDescription, cap: usize) -> Result<QcnnOutput> {
    check_input(state, circuit, cap)?;
    let mut psi = state.clone();
    let final_state = deferred_state(&mut psi, circuit)?;
    let r = circuit.readout;
    let e = final_state.expectation_string(&crate::sim::PauliString::new(
        circuit.num_qubits,
        PauliKey::single(r.qubit, r.basis.pauli()),
        crate::sim::C64::new(1.0, 0.0),
    ));
    Ok(QcnnOutput::exact(e.re))
}

/// Applies the deferred-measurement circuit in place and returns the state.
pub fn deferred_state<'a>(psi: &'a mut StateVector, circuit: &CircuitDescription) -> Result<&'a StateVector> {
    let meas = circuit.measurements();
    for e in &circuit.elements {
        match e {
            Element::Gate { gate, .. } => psi.apply(gate)?,
            Element::Conditional { conditions, gate, .. } => {
                let conds: Vec<(usize, Basis, i8)> = conditions.iter().map(|&(id, o)| (meas[id].0, meas[id].1, o)).collect();
                psi.apply(&controlled_gate(&conds, gate))?;
            }
            Element::Postselect { qubit, basis, outcome } => {
                psi.project(*qubit, *basis, *outcome)?;
            }
            Element::Measure { .. } | Element::Marker(_) => {}
        }
    }
    Ok(psi)
}

/// Register state while walking a single measurement record.
#[derive(Clone)]
struct Walker {
    state: StateVector,
    /// Current register index of each circuit qubit.
    pos: Vec<Option<usize>>,
    outcomes: Vec<i8>,
    probability: f64,
    snapshots: Vec<(Marker, StateVector)>,
    keep_snapshots: bool,
}

impl Walker {
    fn new(state: &StateVector, keep_snapshots: bool) -> Walker {
        Walker {
            state: state.clone(),
            pos: (0..state.num_qubits()).map(Some).collect(),
            outcomes: Vec::new(),
            probability: 1.0,
            snapshots: Vec::new(),
            keep_snapshots,
        }
    }

    fn at(&self, q: usize) -> Result<usize> {
        self.pos[q].ok_or_else(|| Error::InvalidArgument(format!("qubit {q} was already measured")))
    }

    fn remap(&self, g: &UnitaryGate) -> Result<UnitaryGate> {
        let targets = g.targets.iter().map(|&t| self.at(t)).collect::<Result<Vec<_>>>()?;
        Ok(UnitaryGate { targets, matrix: g.matrix.clone() })
    }

    fn probability(&self, q: usize, basis: Basis, outcome: i8) -> Result<f64> {
        self.state.probability(self.at(q)?, basis, outcome)
    }

    /// Projects, drops the qubit and records the outcome.
    fn collapse(&mut self, q: usize, basis: Basis, outcome: i8) -> Result<()> {
        let idx = self.at(q)?;
        let p = self.state.project(idx, basis, outcome)?;
        self.state = self.state.remove_qubit(idx, basis, outcome)?;
        self.pos[q] = None;
        for slot in self.pos.iter_mut().flatten() {
            if *slot > idx {
                *slot -= 1;
            }
        }
        self.outcomes.push(outcome);
        self.probability *= p;
        Ok(())
    }

    /// Non-measurement elements. Returns false for elements the caller must
    /// handle (measurements and postselection).
    fn step(&mut self, e: &Element) -> Result<bool> {
        match e {
            Element::Gate { gate, .. } => {
                let g = self.remap(gate)?;
                self.state.apply(&g)?;
            }
            Element::Conditional { conditions, gate, .. } => {
                if conditions.iter().all(|&(id, o)| self.outcomes[id] == o) {
                    let g = self.remap(gate)?;
                    self.state.apply(&g)?;
                }
            }
            Element::Marker(m) => {
                if self.keep_snapshots {
                    self.snapshots.push((m.clone(), self.state.clone()));
                }
            }
            Element::Measure { .. } | Element::Postselect { .. } => return Ok(false),
        }
        Ok(true)
    }

    fn readout_expectation(&self, circuit: &CircuitDescription) -> Result<f64> {
        let r = circuit.readout;
        let q = self.at(r.qubit)?;
        Ok(self.state.expectation_string(&crate::sim::PauliString::new(
            self.state.num_qubits(),
            PauliKey::single(q, r.basis.pauli()),
            crate::sim::C64::new(1.0, 0.0),
        ))
        .re)
    }
}

/// One sampled run.
#[derive(Clone, Debug)]
pub struct Trajectory {
    /// Pooling outcomes in measurement order.
    pub outcomes: Vec<i8>,
    /// Sampled ±1 readout; 0 when a postselection rejected the shot.
    pub readout: i8,
    pub accepted: bool,
}

pub fn run_single_trajectory<R: Rng + ?Sized>(state: &StateVector, circuit: &CircuitDescription, rng: &mut R) -> Result<Trajectory> {
    check_input(state, circuit, usize::MAX)?;
    let mut w = Walker::new(state, false);
    for e in &circuit.elements {
        if w.step(e)? {
            continue;
        }
        match e {
            Element::Measure { qubit, basis } => {
                let p_plus = w.probability(*qubit, *basis, 1)?;
                let o = if rng.random::<f64>() < p_plus { 1 } else { -1 };
                w.collapse(*qubit, *basis, o)?;
            }
            Element::Postselect { qubit, basis, outcome } => {
                let p = w.probability(*qubit, *basis, *outcome)?;
                if rng.random::<f64>() >= p {
                    return Ok(Trajectory { outcomes: w.outcomes, readout: 0, accepted: false });
                }
                let idx = w.at(*qubit)?;
                w.state.project(idx, *basis, *outcome)?;
            }
            _ => unreachable!("step handles the rest"),
        }
    }
    let e = w.readout_expectation(circuit)?;
    let readout = if rng.random::<f64>() < (1.0 + e) / 2.0 { 1 } else { -1 };
    Ok(Trajectory { outcomes: w.outcomes, readout, accepted: true })
}

/// Mean of `shots` sampled readouts. Shot `s` draws from its own ChaCha
/// stream seeded by one value taken from `rng`, so the result does not depend
/// on how the shots are scheduled.
pub fn run_trajectories<R: Rng + ?Sized>(
    state: &StateVector,
    circuit: &CircuitDescription,
    shots: usize,
    rng: &mut R,
) -> Result<QcnnOutput> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let master: u64 = rng.random();
    let results: Vec<Result<Trajectory>> = (0..shots)
        .into_par_iter()
        .map(|s| {
            let mut r = ChaCha8Rng::seed_from_u64(master);
            r.set_stream(s as u64);
            run_single_trajectory(state, circuit, &mut r)
        })
        .collect();
    let mut sum = 0.0;
    let mut used = 0usize;
    for t in results {
        let t = t?;
        if t.accepted {
            sum += t.readout as f64;
            used += 1;
        }
    }
    if used == 0 {
        return Err(Error::InvalidArgument("every shot was rejected by postselection".into()));
    }
    let mean = sum / used as f64;
    // readouts are ±1, so the sample variance is 1 − mean²
    let var = if used > 1 { (1.0 - mean * mean) * used as f64 / (used - 1) as f64 } else { 0.0 };
    Ok(QcnnOutput {
        expectation: mean,
        probability_in_phase: (1.0 + mean) / 2.0,
        shots_used: used,
        std_error: (var.max(0.0) / used as f64).sqrt(),
    })
}

/// One measurement record with nonzero probability.
#[derive(Clone, Debug)]
pub struct Branch {
    pub probability: f64,
    pub outcomes: Vec<i8>,
    /// Exact readout expectation on this branch.
    pub readout: f64,
    /// Register state at every marker, on the qubits still alive there.
    pub snapshots: Vec<(Marker, StateVector)>,
}

/// Every measurement record whose probability exceeds `min_probability`.
/// Fails once more than `max_branches` records are found.
pub fn enumerate_branches(
    state: &StateVector,
    circuit: &CircuitDescription,
    min_probability: f64,
    max_branches: usize,
) -> Result<Vec<Branch>> {
    check_input(state, circuit, usize::MAX)?;
    let mut out = Vec::new();
    explore(Walker::new(state, true), circuit, 0, min_probability, max_branches, &mut out)?;
    Ok(out)
}

fn explore(
    mut w: Walker,
    circuit: &CircuitDescription,
    start: usize,
    min_p: f64,
    max_branches: usize,
    out: &mut Vec<Branch>,
) -> Result<()> {
    for (i, e) in circuit.elements.iter().enumerate().skip(start) {
        if w.step(e)? {
            continue;
        }
        match e {
            Element::Measure { qubit, basis } => {
                for o in [1i8, -1] {
                    let p = w.probability(*qubit, *basis, o)?;
                    if w.probability * p <= min_p {
                        continue;
                    }
                    let mut next = w.clone();
                    next.collapse(*qubit, *basis, o)?;
                    explore(next, circuit, i + 1, min_p, max_branches, out)?;
                }
                return Ok(());
            }
            Element::Postselect { qubit, basis, outcome } => {
                let p = w.probability(*qubit, *basis, *outcome)?;
                if w.probability * p <= min_p {
                    return Ok(());
                }
                let idx = w.at(*qubit)?;
                w.state.project(idx, *basis, *outcome)?;
                w.probability *= p;
            }
            _ => unreachable!("step handles the rest"),
        }
    }
    if out.len() >= max_branches {
        return Err(Error::InvalidArgument(format!("more than {max_branches} measurement branches")));
    }
    let readout = w.readout_expectation(circuit)?;
    out.push(Branch { probability: w.probability, outcomes: w.outcomes, readout, snapshots: w.snapshots });
    Ok(())
}
