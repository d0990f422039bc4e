// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Heisenberg-picture readout of the exact QCNN.
//!
//! The readout `Z X Z` is pulled back through each convolution-pooling unit
//! with measurements deferred. Every gate is conjugated exactly on its own
//! support (dense, at most four qubits), so the chain ends need no special
//! formulas. Coefficients stay exact dyadic rationals.

pub mod dyadic;

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use rayon::prelude::*;

pub use dyadic::Dyadic;

use crate::exact::{final_width, unit_elements, unit_survivors, Element};
use crate::sim::gate::controlled_gate;
use crate::sim::linalg::{CMat, C64};
use crate::sim::{Basis, Pauli, PauliKey, PauliSum, StateVector, UnitaryGate};
use crate::{Error, Result};

/// Pauli sum with exact dyadic coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicSum {
    pub num_qubits: usize,
    terms: BTreeMap<PauliKey, Dyadic>,
}

impl DyadicSum {
    pub fn new(num_qubits: usize) -> DyadicSum {
        DyadicSum { num_qubits, terms: BTreeMap::new() }
    }

    pub fn single(num_qubits: usize, key: PauliKey) -> DyadicSum {
        let mut s = DyadicSum::new(num_qubits);
        s.add_term(key, Dyadic::ONE);
        s
    }

    pub fn add_term(&mut self, key: PauliKey, c: Dyadic) {
        let e = self.terms.entry(key).or_insert(Dyadic::ZERO);
        *e = *e + c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliKey, &Dyadic)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &PauliKey) -> Dyadic {
        self.terms.get(key).copied().unwrap_or(Dyadic::ZERO)
    }

    /// Exact Σ c².
    pub fn two_norm_sqr(&self) -> Dyadic {
        self.terms.values().map(|c| *c * *c).sum()
    }

    pub fn to_pauli_sum(&self) -> PauliSum {
        PauliSum::from_terms(self.num_qubits, self.terms.iter().map(|(k, c)| (*k, C64::new(c.to_f64(), 0.0))))
    }

    /// Relabels qubit `q` as `map[q]` on a register of `num_qubits`.
    pub fn embed(&self, map: &[usize], num_qubits: usize) -> DyadicSum {
        let mut out = DyadicSum::new(num_qubits);
        for (k, c) in &self.terms {
            out.add_term(relabel(k, map), *c);
        }
        out
    }
}

fn relabel(k: &PauliKey, map: &[usize]) -> PauliKey {
    let mut out = PauliKey::IDENTITY;
    for (q, &t) in map.iter().enumerate() {
        let p = k.get(q);
        if p != Pauli::I {
            out.set(t, p);
        }
    }
    out
}

/// Gates of a program with every measurement deferred: classical control
/// becomes control in the measured basis.
pub fn deferred_gates(elements: &[Element]) -> Result<Vec<UnitaryGate>> {
    let mut meas: Vec<(usize, Basis)> = Vec::new();
    let mut out = Vec::new();
    for e in elements {
        match e {
            Element::Gate { gate, .. } => out.push(gate.clone()),
            Element::Measure { qubit, basis } => meas.push((*qubit, *basis)),
            Element::Conditional { conditions, gate, .. } => {
                let c: Vec<(usize, Basis, i8)> = conditions.iter().map(|&(id, o)| (meas[id].0, meas[id].1, o)).collect();
                out.push(controlled_gate(&c, gate));
            }
            Element::Postselect { .. } => {
                return Err(Error::InvalidArgument("postselection has no Heisenberg-picture unitary".into()))
            }
            Element::Marker(_) => {}
        }
    }
    Ok(out)
}

/// Local images `G† p G` in the Pauli basis, keyed by the local pattern `p`.
struct LocalTable {
    gate: UnitaryGate,
    images: HashMap<PauliKey, Vec<(PauliKey, Dyadic)>>,
}

impl LocalTable {
    fn new(gate: UnitaryGate) -> LocalTable {
        LocalTable { gate, images: HashMap::new() }
    }

    fn local(&self, k: &PauliKey) -> PauliKey {
        let mut out = PauliKey::IDENTITY;
        for (j, &t) in self.gate.targets.iter().enumerate() {
            out.set(j, k.get(t));
        }
        out
    }

    fn compute(&self, p: &PauliKey) -> Result<Vec<(PauliKey, Dyadic)>> {
        let k = self.gate.targets.len();
        let dim = 1usize << k;
        let g = &self.gate.matrix;
        let m: CMat = g.adjoint() * p.to_dense(k) * g;
        let mut out = Vec::new();
        for x in 0..dim {
            for z in 0..dim {
                let q = PauliKey { x: x as u128, z: z as u128 };
                let c: C64 = (0..dim).map(|i| q.basis_phase(i).conj() * m[(i ^ x, i)]).sum::<C64>() / dim as f64;
                if c.norm() < 1e-12 {
                    continue;
                }
                if c.im.abs() > 1e-12 {
                    return Err(Error::InvalidArgument("conjugated Pauli has a complex coefficient".into()));
                }
                let d = Dyadic::from_f64(c.re, 40, 1e-12)
                    .ok_or_else(|| Error::InvalidArgument(format!("coefficient {} is not dyadic", c.re)))?;
                out.push((q, d));
            }
        }
        Ok(out)
    }

    fn ensure(&mut self, sum: &DyadicSum) -> Result<()> {
        let mut missing: Vec<PauliKey> = sum.terms.keys().map(|k| self.local(k)).filter(|l| !self.images.contains_key(l)).collect();
        missing.sort();
        missing.dedup();
        let computed: Vec<Result<Vec<(PauliKey, Dyadic)>>> = missing.par_iter().map(|p| self.compute(p)).collect();
        for (p, r) in missing.into_iter().zip(computed) {
            self.images.insert(p, r?);
        }
        Ok(())
    }

    fn conjugate(&mut self, sum: &DyadicSum) -> Result<DyadicSum> {
        let support = self.gate.targets.iter().fold(0u128, |acc, &t| acc | (1u128 << t));
        self.ensure(sum)?;
        let terms: Vec<(&PauliKey, &Dyadic)> = sum.terms.iter().collect();
        let pieces: Vec<Vec<(PauliKey, Dyadic)>> = terms
            .par_iter()
            .map(|(k, c)| {
                let l = self.local(k);
                let base = PauliKey { x: k.x & !support, z: k.z & !support };
                self.images[&l]
                    .iter()
                    .map(|(q, d)| {
                        let mut key = base;
                        for (j, &t) in self.gate.targets.iter().enumerate() {
                            key.set(t, q.get(j));
                        }
                        (key, **c * *d)
                    })
                    .collect()
            })
            .collect();
        let mut out = DyadicSum::new(sum.num_qubits);
        for (key, c) in pieces.into_iter().flatten() {
            out.add_term(key, c);
        }
        Ok(out)
    }
}

/// `U† O U` for `U` the time-ordered product of `gates` (first gate acts first).
pub fn conjugate_through(sum: &DyadicSum, gates: &[UnitaryGate]) -> Result<DyadicSum> {
    let mut cur = sum.clone();
    for g in gates.iter().rev() {
        cur = LocalTable::new(g.clone()).conjugate(&cur)?;
    }
    Ok(cur)
}

/// Site bookkeeping of one unit: a chain of `input_len` qubits whose
/// survivor `i` sits at chain position `survivors[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerGeometry {
    pub depth: usize,
    pub input_len: usize,
    pub survivors: Vec<usize>,
}

impl LayerGeometry {
    pub fn new(depth: usize, input_len: usize) -> Result<LayerGeometry> {
        if input_len < 9 || input_len % 3 != 0 {
            return Err(Error::InvalidArgument(format!("a unit needs a chain of 3k ≥ 9 qubits, got {input_len}")));
        }
        Ok(LayerGeometry { depth, input_len, survivors: unit_survivors(input_len) })
    }

    /// Chain position `ĩ` of survivor `i`.
    pub fn map(&self, i: usize) -> usize {
        self.survivors[i]
    }

    pub fn output_len(&self) -> usize {
        self.survivors.len()
    }

    /// Pulls an operator on the survivors back to the unit's input chain.
    pub fn pull_back(&self, sum: &DyadicSum) -> Result<DyadicSum> {
        if sum.num_qubits != self.output_len() {
            return Err(Error::DimensionMismatch { expected: self.output_len(), got: sum.num_qubits });
        }
        let gates = deferred_gates(&unit_elements(self.input_len)?)?;
        conjugate_through(&sum.embed(&self.survivors, self.input_len), &gates)
    }
}

/// Geometries of units 1..=d for an `n`-qubit input.
pub fn geometries(n: usize, d: usize) -> Result<Vec<LayerGeometry>> {
    if d == 0 {
        return Ok(Vec::new());
    }
    final_width(n, d)?;
    (1..=d).map(|l| LayerGeometry::new(l, n / 3usize.pow(l as u32 - 1))).collect()
}

fn conjugate_single(i: usize, p: Pauli, g: &LayerGeometry) -> Result<PauliSum> {
    if i >= g.output_len() {
        return Err(Error::QubitOutOfRange { qubit: i, num_qubits: g.output_len() });
    }
    let s = DyadicSum::single(g.output_len(), PauliKey::single(i, p));
    Ok(g.pull_back(&s)?.to_pauli_sum())
}

/// Image of `X_i` on survivor `i`, written on the unit's input chain.
pub fn conjugate_x(i: usize, g: &LayerGeometry) -> Result<PauliSum> {
    conjugate_single(i, Pauli::X, g)
}

/// Image of `Z_i` on survivor `i`, written on the unit's input chain.
pub fn conjugate_z(i: usize, g: &LayerGeometry) -> Result<PauliSum> {
    conjugate_single(i, Pauli::Z, g)
}

/// The readout observable pulled back to the input.
#[derive(Clone, Debug)]
pub struct MultiscaleSop {
    pub n: usize,
    pub depth: usize,
    pub site: usize,
    pub operator: DyadicSum,
    /// Term count at the top and after each pulled-back unit.
    pub term_counts: Vec<usize>,
}

impl MultiscaleSop {
    pub fn to_pauli_sum(&self) -> PauliSum {
        self.operator.to_pauli_sum()
    }

    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        state.expectation(&self.to_pauli_sum())
    }

    /// Terms that fail to commute with `X_even` or `X_odd`.
    pub fn asymmetric_terms(&self) -> Vec<PauliKey> {
        let xe = crate::spt::x_parity(self.n, 0);
        let xo = crate::spt::x_parity(self.n, 1);
        self.operator.iter().filter(|(k, _)| !k.commutes_with(&xe) || !k.commutes_with(&xo)).map(|(k, _)| *k).collect()
    }

    /// Canonical rows `(letters, coefficient, exact)` sorted by letters.
    pub fn csv_rows(&self) -> Vec<(String, f64, String)> {
        let mut rows: Vec<(String, f64, String)> =
            self.operator.iter().map(|(k, c)| (k.letters(self.n), c.to_f64(), c.to_string())).collect();
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        rows
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["pauli", "coefficient", "exact"])?;
        for (l, c, e) in self.csv_rows() {
            wtr.write_record([l, format!("{c:e}"), e])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// `Z_{i−1} X_i Z_{i+1}` on `width` qubits.
pub fn readout_string(width: usize, site: usize) -> Result<PauliKey> {
    if site == 0 || site + 1 >= width {
        return Err(Error::InvalidArgument(format!("readout site {site} needs two neighbours in a register of {width}")));
    }
    let mut k = PauliKey::single(site - 1, Pauli::Z);
    k.set(site, Pauli::X);
    k.set(site + 1, Pauli::Z);
    Ok(k)
}

/// Readout on the middle qubit of the final register.
pub fn multiscale_sop(n: usize, d: usize) -> Result<MultiscaleSop> {
    let m = if d == 0 { n } else { final_width(n, d)? };
    multiscale_sop_at(n, d, m / 2)
}

/// Readout at position `site` of the final register of `N / 3^d` qubits.
pub fn multiscale_sop_at(n: usize, d: usize, site: usize) -> Result<MultiscaleSop> {
    let m = if d == 0 { n } else { final_width(n, d)? };
    let mut op = DyadicSum::single(m, readout_string(m, site)?);
    let mut counts = vec![op.len()];
    for g in geometries(n, d)?.iter().rev() {
        op = g.pull_back(&op)?;
        counts.push(op.len());
    }
    Ok(MultiscaleSop { n, depth: d, site, operator: op, term_counts: counts })
}

/// Result of dropping small terms.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub sum: PauliSum,
    /// Σ|c| over dropped terms.
    pub dropped_weight: f64,
    pub dropped_terms: usize,
}

/// Drops terms with `|c| < threshold`.
pub fn truncate(sum: &PauliSum, threshold: f64) -> Result<Truncation> {
    if !(threshold >= 0.0) {
        return Err(Error::InvalidArgument(format!("threshold must be ≥ 0, got {threshold}")));
    }
    let mut kept = PauliSum::new(sum.num_qubits);
    let mut dropped_weight = 0.0;
    let mut dropped_terms = 0;
    for (k, c) in sum.iter() {
        if c.norm() < threshold {
            dropped_weight += c.norm();
            dropped_terms += 1;
        } else {
            kept.add_term(*k, *c);
        }
    }
    Ok(Truncation { sum: kept, dropped_weight, dropped_terms })
}

/// `⟨P⟩` on the open-chain cluster state of `n` qubits, from the stabilizer
/// group: the only element with X pattern `x` is the product of the
/// generators `Z_{j−1} X_j Z_{j+1}` over `j ∈ x`.
pub fn cluster_expectation(key: &PauliKey, n: usize) -> f64 {
    let mut phase = 0;
    let mut prod = PauliKey::IDENTITY;
    for j in (0..n).filter(|j| (key.x >> j) & 1 == 1) {
        let mut g = PauliKey::single(j, Pauli::X);
        if j > 0 {
            g.set(j - 1, Pauli::Z);
        }
        if j + 1 < n {
            g.set(j + 1, Pauli::Z);
        }
        let (ph, k) = prod.mul_phase(&g);
        phase += ph;
        prod = k;
    }
    if prod != *key {
        return 0.0;
    }
    // product = i^phase · key has expectation 1
    match phase.rem_euclid(4) {
        0 => 1.0,
        2 => -1.0,
        _ => unreachable!("commuting Hermitian generators give a Hermitian product"),
    }
}

/// Exact `⟨O⟩` on the cluster state.
pub fn cluster_value(sum: &DyadicSum) -> Dyadic {
    sum.iter()
        .map(|(k, c)| match cluster_expectation(k, sum.num_qubits) {
            v if v > 0.0 => *c,
            v if v < 0.0 => -*c,
            _ => Dyadic::ZERO,
        })
        .sum()
}

/// `X_q O X_q`: flips the sign of terms anticommuting with `X_q`.
pub fn conjugate_by_x(sum: &DyadicSum, q: usize) -> DyadicSum {
    let x = PauliKey::single(q, Pauli::X);
    let mut out = DyadicSum::new(sum.num_qubits);
    for (k, c) in sum.iter() {
        out.add_term(*k, if k.commutes_with(&x) { *c } else { -*c });
    }
    out
}
