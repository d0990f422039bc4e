// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! The exact cluster-phase QCNN.
//!
//! A unit acts on the active chain `A` of length `L` and keeps
//! `s_k = A[3k+1]`. In time order:
//!
//! 1. CZ on every neighbouring pair of `A`.
//! 2. Boundary CxZ gates: `A[1] → A[0]` and `A[L−2] → A[L−1]`.
//! 3. CZ between neighbouring survivors.
//! 4. X on `s_k` controlled by X = −1 on both `A[3k]` and `A[3k+2]`.
//! 5. X measurement of `A[3k]` and `A[3k+2]`.
//! 6. Z on `s_k` for a −1 outcome on `A[3k+3]` or on `A[3k−1]`, plus one
//!    three-outcome correction at each end of the chain.
//!
//! The fully connected layer applies CZ on both sides of the readout qubit and
//! measures it in X, which reads out `Z_{i−1} X_i Z_{i+1}`.

use super::circuit::{CircuitDescription, Element, GateKind, Marker, Readout};
use crate::sim::gate::{self, controlled};
use crate::sim::{Basis, Pauli};
use crate::{Error, Result};

/// Size of the register left after `d` units, `N / 3^d`, after checking that
/// it is an integer of at least 3.
pub fn final_width(n: usize, d: usize) -> Result<usize> {
    if d == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let div = 3usize.checked_pow(d as u32).ok_or_else(|| Error::InvalidArgument(format!("depth {d} too large")))?;
    if n % div != 0 || n / div < 3 {
        return Err(Error::InvalidArgument(format!("N = {n} is not m·3^{d} with m ≥ 3")));
    }
    Ok(n / div)
}

/// Circuit with the readout on the middle surviving qubit.
pub fn build_exact_circuit(n: usize, d: usize) -> Result<CircuitDescription> {
    let m = final_width(n, d)?;
    build_exact_circuit_at(n, d, m / 2)
}

/// Circuit reading out `Z X Z` around position `site` of the final register.
pub fn build_exact_circuit_at(n: usize, d: usize, site: usize) -> Result<CircuitDescription> {
    let m = final_width(n, d)?;
    if site == 0 || site + 1 >= m {
        return Err(Error::InvalidArgument(format!("readout site {site} needs two neighbours in a register of {m}")));
    }
    let mut elements = Vec::new();
    let mut active: Vec<usize> = (0..n).collect();
    let mut num_meas = 0;
    for depth in 1..=d {
        elements.push(Element::Marker(Marker::Unit { depth, active: active.clone() }));
        active = push_unit(&mut elements, &active, &mut num_meas);
    }
    elements.push(Element::Marker(Marker::Final { active: active.clone() }));
    let (l, c, r) = (active[site - 1], active[site], active[site + 1]);
    elements.push(Element::Gate { kind: GateKind::Final, gate: gate::cz(l, c) });
    elements.push(Element::Gate { kind: GateKind::Final, gate: gate::cz(c, r) });
    let circuit = CircuitDescription { num_qubits: n, elements, readout: Readout { qubit: c, basis: Basis::X } };
    circuit.validate()?;
    Ok(circuit)
}

/// One unit on a bare chain `0..len`, measurements numbered from 0.
pub fn unit_elements(len: usize) -> Result<Vec<Element>> {
    if len < 9 || len % 3 != 0 {
        return Err(Error::InvalidArgument(format!("a unit needs a chain of 3k ≥ 9 qubits, got {len}")));
    }
    let mut out = Vec::new();
    let a: Vec<usize> = (0..len).collect();
    push_unit(&mut out, &a, &mut 0);
    Ok(out)
}

/// Survivor positions of a unit on a chain of `len`.
pub fn unit_survivors(len: usize) -> Vec<usize> {
    (0..len / 3).map(|k| 3 * k + 1).collect()
}

/// Appends one convolution-pooling unit and returns the survivors.
fn push_unit(out: &mut Vec<Element>, a: &[usize], num_meas: &mut usize) -> Vec<usize> {
    let l = a.len();
    let k_max = l / 3;
    let s: Vec<usize> = (0..k_max).map(|k| a[3 * k + 1]).collect();
    let cxz = |c: usize, t: usize| controlled(&[(c, Basis::X, -1)], t, Pauli::Z);
    let g = |kind, gate| Element::Gate { kind, gate };

    for j in 0..l - 1 {
        out.push(g(GateKind::Cz, gate::cz(a[j], a[j + 1])));
    }
    out.push(g(GateKind::CxZ, cxz(a[1], a[0])));
    out.push(g(GateKind::CxZ, cxz(a[l - 2], a[l - 1])));
    for k in 0..k_max - 1 {
        out.push(g(GateKind::Cz, gate::cz(s[k], s[k + 1])));
    }
    for k in 0..k_max {
        let t = controlled(&[(a[3 * k], Basis::X, -1), (a[3 * k + 2], Basis::X, -1)], s[k], Pauli::X);
        out.push(g(GateKind::Toffoli, t));
    }

    // measurement id of chain position p (p ≡ 0, 2 mod 3)
    let mut id = vec![usize::MAX; l];
    for k in 0..k_max {
        for p in [3 * k, 3 * k + 2] {
            out.push(Element::Measure { qubit: a[p], basis: Basis::X });
            id[p] = *num_meas;
            *num_meas += 1;
        }
    }
    let cond = |conditions: Vec<(usize, i8)>, target: usize| Element::Conditional {
        kind: GateKind::CxZ,
        conditions,
        gate: gate::pauli(target, Pauli::Z),
    };
    for k in 0..k_max {
        if 3 * k + 3 < l {
            out.push(cond(vec![(id[3 * k + 3], -1)], s[k]));
        }
        if k > 0 {
            out.push(cond(vec![(id[3 * k - 1], -1)], s[k]));
        }
    }
    out.push(cond(vec![(id[0], -1), (id[2], 1), (id[3], 1)], s[0]));
    out.push(cond(vec![(id[l - 1], -1), (id[l - 3], 1), (id[l - 4], 1)], s[k_max - 1]));
    s
}
