// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Matrix-free Hamiltonians given by term lists.
//!
//! Qubit models keep Pauli terms and apply them with the bit-flip/phase rule.
//! Models with a larger local dimension (spin-1 chains) keep dense local
//! operators on mixed-radix indices, site 0 least significant.

use rand::Rng;

use crate::sim::linalg::{CMat, C64, ZERO};
use crate::sim::state::gaussian_c64;
use crate::sim::PauliKey;
use crate::{Error, Result};

/// Default cap on the Hilbert-space dimension, 2^21.
pub const DEFAULT_DIM_CAP: usize = 1 << 21;

#[derive(Clone, Debug)]
pub struct LocalTerm {
    /// Sites in increasing significance of the operator's own index.
    pub sites: Vec<usize>,
    pub matrix: CMat,
}

/// Terms sharing one flip mask `x`. The phase of `|i⟩ ↦ |i ⊕ x⟩` depends
/// only on the bits of `i` in a short window, so it is tabulated.
#[derive(Clone, Debug)]
struct FlipGroup {
    x: usize,
    shift: u32,
    mask: usize,
    table: Vec<C64>,
}

impl FlipGroup {
    fn build(x: usize, terms: &[(PauliKey, f64)]) -> Option<FlipGroup> {
        let zs = terms.iter().fold(0usize, |acc, (k, _)| acc | k.z as usize);
        let shift = if zs == 0 { 0 } else { zs.trailing_zeros() };
        let span = if zs == 0 { 0 } else { usize::BITS - zs.leading_zeros() - shift };
        if span > 12 {
            return None;
        }
        let table = (0..1usize << span)
            .map(|w| {
                let i = w << shift;
                terms.iter().map(|(k, c)| k.basis_phase(i) * *c).sum()
            })
            .collect();
        Some(FlipGroup { x, shift, mask: (1usize << span) - 1, table })
    }
}

#[derive(Clone, Debug)]
enum Terms {
    Pauli { terms: Vec<(PauliKey, f64)>, groups: Option<Vec<FlipGroup>> },
    Local { local_dim: usize, terms: Vec<LocalTerm> },
}

#[derive(Clone, Debug)]
pub struct SparseHamiltonian {
    num_sites: usize,
    dim: usize,
    terms: Terms,
}

impl SparseHamiltonian {
    /// Real-weighted Pauli strings on `num_qubits` qubits.
    pub fn from_pauli_terms(num_qubits: usize, terms: Vec<(PauliKey, f64)>, cap: usize) -> Result<SparseHamiltonian> {
        if num_qubits >= usize::BITS as usize - 1 {
            return Err(Error::CapExceeded { dim: usize::MAX, cap });
        }
        let dim = 1usize << num_qubits;
        if dim > cap {
            return Err(Error::CapExceeded { dim, cap });
        }
        let mask = dim as u128 - 1;
        if terms.iter().any(|(k, _)| (k.x | k.z) & !mask != 0) {
            return Err(Error::InvalidArgument("Pauli term acts outside the register".into()));
        }
        let mut by_x: std::collections::BTreeMap<usize, Vec<(PauliKey, f64)>> = Default::default();
        for t in &terms {
            by_x.entry(t.0.x as usize).or_default().push(*t);
        }
        let groups = by_x.iter().map(|(x, ts)| FlipGroup::build(*x, ts)).collect::<Option<Vec<_>>>();
        Ok(SparseHamiltonian { num_sites: num_qubits, dim, terms: Terms::Pauli { terms, groups } })
    }

    /// Dense local operators on sites of dimension `local_dim`.
    pub fn from_local_terms(num_sites: usize, local_dim: usize, terms: Vec<LocalTerm>, cap: usize) -> Result<SparseHamiltonian> {
        if local_dim < 2 {
            return Err(Error::InvalidArgument("local dimension must be at least 2".into()));
        }
        let dim = (0..num_sites).try_fold(1usize, |acc, _| acc.checked_mul(local_dim).filter(|d| *d <= cap));
        let dim = dim.ok_or(Error::CapExceeded { dim: usize::MAX, cap })?;
        for t in &terms {
            let k = t.sites.len();
            let want = local_dim.pow(k as u32);
            if t.matrix.nrows() != want || t.matrix.ncols() != want {
                return Err(Error::DimensionMismatch { expected: want, got: t.matrix.nrows() });
            }
            if t.sites.iter().any(|&s| s >= num_sites) {
                return Err(Error::InvalidArgument("local term acts outside the chain".into()));
            }
        }
        Ok(SparseHamiltonian { num_sites, dim, terms: Terms::Local { local_dim, terms } })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn num_terms(&self) -> usize {
        match &self.terms {
            Terms::Pauli { terms, .. } => terms.len(),
            Terms::Local { terms, .. } => terms.len(),
        }
    }

    pub fn pauli_terms(&self) -> Option<&[(PauliKey, f64)]> {
        match &self.terms {
            Terms::Pauli { terms, .. } => Some(terms),
            Terms::Local { .. } => None,
        }
    }

    /// Upper bound on the spectral radius from the term weights.
    pub fn norm_bound(&self) -> f64 {
        match &self.terms {
            Terms::Pauli { terms, .. } => terms.iter().map(|(_, c)| c.abs()).sum(),
            Terms::Local { terms, .. } => terms
                .iter()
                .map(|t| t.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
                .sum(),
        }
    }

    /// `out = H v`.
    pub fn apply(&self, v: &[C64], out: &mut [C64]) {
        assert_eq!(v.len(), self.dim);
        assert_eq!(out.len(), self.dim);
        out.fill(ZERO);
        match &self.terms {
            Terms::Pauli { groups: Some(groups), .. } => {
                for g in groups {
                    for (i, a) in v.iter().enumerate() {
                        out[i ^ g.x] += g.table[(i >> g.shift) & g.mask] * a;
                    }
                }
            }
            Terms::Pauli { terms, groups: None } => {
                let mut diag: Vec<f64> = Vec::new();
                for (key, c) in terms {
                    if key.x == 0 {
                        if diag.is_empty() {
                            diag = vec![0.0; self.dim];
                        }
                        let z = key.z as usize;
                        for (i, d) in diag.iter_mut().enumerate() {
                            *d += if (i & z).count_ones() % 2 == 0 { *c } else { -*c };
                        }
                        continue;
                    }
                    let x = key.x as usize;
                    let z = key.z as usize;
                    let y_phase = crate::sim::pauli::i_pow((key.x & key.z).count_ones() as i32) * *c;
                    for (i, a) in v.iter().enumerate() {
                        let ph = if (i & z).count_ones() % 2 == 0 { y_phase } else { -y_phase };
                        out[i ^ x] += ph * a;
                    }
                }
                for ((o, a), d) in out.iter_mut().zip(v).zip(diag.iter()) {
                    *o += a * d;
                }
            }
            Terms::Local { local_dim, terms } => {
                let d = *local_dim;
                let strides: Vec<usize> = (0..self.num_sites).map(|s| d.pow(s as u32)).collect();
                for t in terms {
                    let sub = t.matrix.nrows();
                    let offs: Vec<usize> = (0..sub)
                        .map(|m| {
                            let mut rem = m;
                            let mut off = 0;
                            for &s in &t.sites {
                                off += (rem % d) * strides[s];
                                rem /= d;
                            }
                            off
                        })
                        .collect();
                    let digit = |i: usize| t.sites.iter().rev().fold(0, |m, &s| m * d + (i / strides[s]) % d);
                    for (i, a) in v.iter().enumerate() {
                        if *a == ZERO {
                            continue;
                        }
                        let col = digit(i);
                        let base = i - offs[col];
                        for (row, off) in offs.iter().enumerate() {
                            let m = t.matrix[(row, col)];
                            if m != ZERO {
                                out[base + off] += m * a;
                            }
                        }
                    }
                }
            }
        }
    }

    pub fn apply_vec(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.dim];
        self.apply(v, &mut out);
        out
    }

    /// `⟨v|H|v⟩ / ⟨v|v⟩`.
    pub fn rayleigh_quotient(&self, v: &[C64]) -> f64 {
        let hv = self.apply_vec(v);
        let num: C64 = v.iter().zip(&hv).map(|(a, b)| a.conj() * b).sum();
        let den: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        num.re / den
    }

    /// `max |⟨u|Hv⟩ − conj(⟨v|Hu⟩)|` over `samples` random pairs.
    pub fn hermiticity_defect<R: Rng + ?Sized>(&self, samples: usize, rng: &mut R) -> f64 {
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let u = random_vector(self.dim, rng);
            let v = random_vector(self.dim, rng);
            let hv = self.apply_vec(&v);
            let hu = self.apply_vec(&u);
            let a: C64 = u.iter().zip(&hv).map(|(x, y)| x.conj() * y).sum();
            let b: C64 = v.iter().zip(&hu).map(|(x, y)| x.conj() * y).sum();
            worst = worst.max((a - b.conj()).norm());
        }
        worst
    }

    /// Dense matrix through the matrix-free apply, for small dimensions.
    pub fn to_dense(&self) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        let mut e = vec![ZERO; self.dim];
        let mut col = vec![ZERO; self.dim];
        for j in 0..self.dim {
            e[j] = C64::new(1.0, 0.0);
            self.apply(&e, &mut col);
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = *x;
            }
            e[j] = ZERO;
        }
        m
    }
}

/// Unnormalized complex Gaussian vector.
pub fn random_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    (0..dim).map(|_| gaussian_c64(rng)).collect()
}
