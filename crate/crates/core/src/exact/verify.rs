// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Fixed-point and error-correction checks for the exact circuit.
//!
//! Fixed point: the cluster state on `L` qubits leaves every unit as the
//! cluster state on `L/3`, with every pooling outcome +1.
//! Error correction: after any single `X_i`, each unit still outputs the
//! cluster state, the readout is still 1, and at least one pooling outcome
//! is −1.

use serde::Serialize;

use super::build::final_width;
use super::circuit::{CircuitDescription, Marker};
use super::run::{enumerate_branches, Branch};
use crate::heisenberg::{cluster_value, conjugate_by_x, multiscale_sop_at, Dyadic};
use crate::sim::{Pauli, PauliKey};
use crate::spt::{cluster_state, DEFAULT_DIM_CAP};
use crate::{Error, Result};

const TOL: f64 = 1e-10;
const MAX_BRANCHES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerifyRoute {
    /// Branch-by-branch state-vector execution.
    Statevector,
    /// Readout checks on the pulled-back observable; pooling outcomes are
    /// not checked on this route.
    Heisenberg,
}

#[derive(Clone, Debug, Serialize)]
pub struct SiteCheck {
    /// Qubit carrying the injected X error, `None` for the clean input.
    pub error_site: Option<usize>,
    pub readout: f64,
    /// Smallest number of −1 pooling outcomes over all branches.
    pub min_flagged: Option<usize>,
    /// Smallest fidelity of any unit output with the reduced cluster state.
    pub min_unit_fidelity: Option<f64>,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriteriaReport {
    pub n: usize,
    pub depth: usize,
    pub route: VerifyRoute,
    pub fixed_point: SiteCheck,
    pub qec: Vec<SiteCheck>,
}

impl CriteriaReport {
    pub fn passed(&self) -> bool {
        self.fixed_point.passed && self.qec.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<String> {
        std::iter::once(&self.fixed_point).chain(&self.qec).filter(|c| !c.passed).map(|c| c.detail.clone()).collect()
    }
}

/// Checks both criteria with the state-vector route when `2^N ≤ cap`,
/// otherwise on the Heisenberg-picture observable.
pub fn verify_construction_criteria(circuit: &CircuitDescription, n: usize, d: usize) -> Result<CriteriaReport> {
    verify_construction_criteria_capped(circuit, n, d, DEFAULT_DIM_CAP)
}

pub fn verify_construction_criteria_capped(circuit: &CircuitDescription, n: usize, d: usize, cap: usize) -> Result<CriteriaReport> {
    final_width(n, d)?;
    if circuit.num_qubits != n || circuit.num_units() != d {
        return Err(Error::InvalidArgument(format!(
            "circuit has {} qubits and {} units, expected {n} and {d}",
            circuit.num_qubits,
            circuit.num_units()
        )));
    }
    if n < usize::BITS as usize - 1 && (1usize << n) <= cap {
        statevector_route(circuit, n, d)
    } else {
        heisenberg_route(circuit, n, d)
    }
}

fn unit_outputs(b: &Branch) -> Vec<(usize, f64)> {
    // the snapshot at each marker after the first is the previous unit's output
    b.snapshots
        .iter()
        .skip(1)
        .enumerate()
        .map(|(u, (m, s))| {
            let len = match m {
                Marker::Unit { active, .. } | Marker::Final { active } => active.len(),
            };
            debug_assert_eq!(len, s.num_qubits());
            (u + 1, s.fidelity(&cluster_state(len)))
        })
        .collect()
}

fn check_branches(branches: &[Branch], error_site: Option<usize>, first_unit_meas: usize) -> SiteCheck {
    let label = match error_site {
        None => "clean input".to_string(),
        Some(q) => format!("X error on qubit {q}"),
    };
    let total_p: f64 = branches.iter().map(|b| b.probability).sum();
    let readout: f64 = branches.iter().map(|b| b.probability * b.readout).sum::<f64>() / total_p.max(f64::MIN_POSITIVE);
    let mut problems = Vec::new();
    let mut min_flagged = usize::MAX;
    let mut min_fid: f64 = 1.0;
    for b in branches {
        let flagged = b.outcomes[..first_unit_meas].iter().filter(|&&o| o == -1).count();
        min_flagged = min_flagged.min(flagged);
        for (unit, f) in unit_outputs(b) {
            min_fid = min_fid.min(f);
            if f < 1.0 - TOL {
                problems.push(format!("unit {unit} output has cluster fidelity {f:.3e}"));
            }
        }
        if (b.readout - 1.0).abs() > TOL {
            problems.push(format!("branch readout {:.12}", b.readout));
        }
        match error_site {
            None if b.outcomes.iter().any(|&o| o == -1) => {
                let pos: Vec<usize> = b.outcomes.iter().enumerate().filter(|(_, &o)| o == -1).map(|(i, _)| i).collect();
                problems.push(format!("pooling measurements {pos:?} gave −1"));
            }
            Some(_) if flagged == 0 => problems.push("no pooling measurement in the first unit gave −1".into()),
            _ => {}
        }
    }
    if (total_p - 1.0).abs() > 1e-9 {
        problems.push(format!("branch probabilities sum to {total_p}"));
    }
    problems.sort();
    problems.dedup();
    let passed = problems.is_empty();
    SiteCheck {
        error_site,
        readout,
        min_flagged: Some(min_flagged),
        min_unit_fidelity: Some(min_fid),
        passed,
        detail: if passed { format!("{label}: ok") } else { format!("{label}: {}", problems.join("; ")) },
    }
}

fn statevector_route(circuit: &CircuitDescription, n: usize, d: usize) -> Result<CriteriaReport> {
    let first_unit_meas = 2 * n / 3;
    let clean = cluster_state(n);
    let fixed_point = check_branches(&enumerate_branches(&clean, circuit, 1e-12, MAX_BRANCHES)?, None, first_unit_meas);
    let mut qec = Vec::with_capacity(n);
    for q in 0..n {
        let mut s = clean.clone();
        s.apply_pauli(&PauliKey::single(q, Pauli::X));
        qec.push(check_branches(&enumerate_branches(&s, circuit, 1e-12, MAX_BRANCHES)?, Some(q), first_unit_meas));
    }
    Ok(CriteriaReport { n, depth: d, route: VerifyRoute::Statevector, fixed_point, qec })
}

fn heisenberg_route(circuit: &CircuitDescription, n: usize, d: usize) -> Result<CriteriaReport> {
    let site = readout_site(circuit, n, d)?;
    let o = multiscale_sop_at(n, d, site)?.operator;
    let one = |v: Dyadic, label: String, error_site| {
        let passed = v == Dyadic::ONE;
        SiteCheck {
            error_site,
            readout: v.to_f64(),
            min_flagged: None,
            min_unit_fidelity: None,
            passed,
            detail: if passed { format!("{label}: ok") } else { format!("{label}: readout {v}") },
        }
    };
    let fixed_point = one(cluster_value(&o), "clean input".into(), None);
    let qec = (0..n).map(|q| one(cluster_value(&conjugate_by_x(&o, q)), format!("X error on qubit {q}"), Some(q))).collect();
    Ok(CriteriaReport { n, depth: d, route: VerifyRoute::Heisenberg, fixed_point, qec })
}

fn readout_site(circuit: &CircuitDescription, n: usize, d: usize) -> Result<usize> {
    let active = circuit
        .elements
        .iter()
        .find_map(|e| match e {
            super::circuit::Element::Marker(Marker::Final { active }) => Some(active.clone()),
            _ => None,
        })
        .ok_or_else(|| Error::InvalidArgument("circuit has no final layer".into()))?;
    debug_assert_eq!(active.len(), final_width(n, d)?);
    active
        .iter()
        .position(|&q| q == circuit.readout.qubit)
        .ok_or_else(|| Error::InvalidArgument("readout qubit is not in the final register".into()))
}
