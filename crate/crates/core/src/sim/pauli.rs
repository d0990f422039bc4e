// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Pauli strings and sums over at most 128 qubits.
//!
//! A string is stored as two bit masks. Qubit `q` carries X when only bit
//! `q` of `x` is set, Z when only bit `q` of `z` is set and Y when both are.
//! Letter strings print qubit 0 first.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::linalg::{c, C64, CMat, ONE, ZERO};
use crate::{Error, Result};

pub const MAX_PAULI_QUBITS: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(ch: char) -> Option<Pauli> {
        match ch {
            'I' | '_' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn matrix(self) -> CMat {
        use super::linalg::{identity, pauli_x, pauli_y, pauli_z};
        match self {
            Pauli::I => identity(2),
            Pauli::X => pauli_x(),
            Pauli::Y => pauli_y(),
            Pauli::Z => pauli_z(),
        }
    }
}

/// Letter pattern of a Pauli string, without coefficient.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PauliKey {
    pub x: u128,
    pub z: u128,
}

#[inline]
pub(crate) fn i_pow(k: i32) -> C64 {
    match k.rem_euclid(4) {
        0 => c(1.0, 0.0),
        1 => c(0.0, 1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, -1.0),
    }
}

impl PauliKey {
    pub const IDENTITY: PauliKey = PauliKey { x: 0, z: 0 };

    pub fn single(q: usize, p: Pauli) -> PauliKey {
        let mut k = PauliKey::IDENTITY;
        k.set(q, p);
        k
    }

    pub fn get(&self, q: usize) -> Pauli {
        match ((self.x >> q) & 1, (self.z >> q) & 1) {
            (0, 0) => Pauli::I,
            (1, 0) => Pauli::X,
            (1, 1) => Pauli::Y,
            _ => Pauli::Z,
        }
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        let bit = 1u128 << q;
        self.x &= !bit;
        self.z &= !bit;
        match p {
            Pauli::I => {}
            Pauli::X => self.x |= bit,
            Pauli::Y => {
                self.x |= bit;
                self.z |= bit
            }
            Pauli::Z => self.z |= bit,
        }
    }

    pub fn support(&self) -> u128 {
        self.x | self.z
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Product `self · other` as `(i^k, key)` with `k` in 0..4.
    #[inline]
    pub fn mul_phase(&self, other: &PauliKey) -> (i32, PauliKey) {
        let (xa, ya, za) = (self.x & !self.z, self.x & self.z, self.z & !self.x);
        let (xb, yb, zb) = (other.x & !other.z, other.x & other.z, other.z & !other.x);
        let pos = ((xa & yb) | (ya & zb) | (za & xb)).count_ones() as i32;
        let neg = ((ya & xb) | (za & yb) | (xa & zb)).count_ones() as i32;
        ((pos - neg).rem_euclid(4), PauliKey { x: self.x ^ other.x, z: self.z ^ other.z })
    }

    pub fn commutes_with(&self, other: &PauliKey) -> bool {
        // symplectic form
        (((self.x & other.z) ^ (self.z & other.x)).count_ones() & 1) == 0
    }

    /// `P|i⟩ = phase · |i ⊕ x⟩`; returns the phase for basis index `i`.
    #[inline]
    pub fn basis_phase(&self, i: usize) -> C64 {
        let y = (self.x & self.z).count_ones() as i32;
        let sign = ((i as u128) & self.z).count_ones() & 1;
        let p = i_pow(y);
        if sign == 1 {
            -p
        } else {
            p
        }
    }

    pub fn letters(&self, num_qubits: usize) -> String {
        (0..num_qubits).map(|q| self.get(q).to_char()).collect()
    }

    pub fn from_letters(s: &str) -> Result<(usize, PauliKey)> {
        let mut k = PauliKey::IDENTITY;
        let chars: Vec<char> = s.trim().chars().collect();
        if chars.len() > MAX_PAULI_QUBITS {
            return Err(Error::InvalidArgument(format!("{} letters exceed the 128-qubit limit", chars.len())));
        }
        for (q, ch) in chars.iter().enumerate() {
            let p = Pauli::from_char(*ch)
                .ok_or_else(|| Error::InvalidArgument(format!("bad Pauli letter {ch:?}")))?;
            k.set(q, p);
        }
        Ok((chars.len(), k))
    }

    /// Dense matrix over `num_qubits` qubits. Test sizes only.
    pub fn to_dense(&self, num_qubits: usize) -> CMat {
        let dim = 1usize << num_qubits;
        let mut m = CMat::zeros(dim, dim);
        let x = self.x as usize;
        for i in 0..dim {
            m[(i ^ x, i)] = self.basis_phase(i);
        }
        m
    }
}

/// A single weighted string.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliString {
    pub num_qubits: usize,
    pub key: PauliKey,
    pub coeff: C64,
}

impl PauliString {
    pub fn new(num_qubits: usize, key: PauliKey, coeff: C64) -> PauliString {
        PauliString { num_qubits, key, coeff }
    }

    pub fn identity(num_qubits: usize) -> PauliString {
        PauliString::new(num_qubits, PauliKey::IDENTITY, ONE)
    }

    pub fn single(num_qubits: usize, q: usize, p: Pauli) -> PauliString {
        PauliString::new(num_qubits, PauliKey::single(q, p), ONE)
    }

    /// Builds a unit-coefficient string from `(qubit, letter)` pairs.
    pub fn from_sites(num_qubits: usize, sites: &[(usize, Pauli)]) -> PauliString {
        let mut k = PauliKey::IDENTITY;
        for &(q, p) in sites {
            k.set(q, p);
        }
        PauliString::new(num_qubits, k, ONE)
    }

    pub fn parse(s: &str) -> Result<PauliString> {
        let (n, key) = PauliKey::from_letters(s)?;
        Ok(PauliString::new(n, key, ONE))
    }

    pub fn letter(&self, q: usize) -> Pauli {
        self.key.get(q)
    }

    pub fn letters(&self) -> String {
        self.key.letters(self.num_qubits)
    }

    /// Letters are Hermitian, so the string is Hermitian iff the coefficient is real.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.coeff.im.abs() <= tol
    }

    pub fn mul(&self, other: &PauliString) -> PauliString {
        let (k, key) = self.key.mul_phase(&other.key);
        PauliString::new(self.num_qubits.max(other.num_qubits), key, self.coeff * other.coeff * i_pow(k))
    }

    pub fn to_dense(&self) -> CMat {
        self.key.to_dense(self.num_qubits) * self.coeff
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:+.6}{:+.6}i) {}", self.coeff.re, self.coeff.im, self.letters())
    }
}

/// Weighted sum of Pauli strings with deterministic iteration order.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    pub num_qubits: usize,
    terms: BTreeMap<PauliKey, C64>,
}

impl PauliSum {
    pub fn new(num_qubits: usize) -> PauliSum {
        PauliSum { num_qubits, terms: BTreeMap::new() }
    }

    pub fn from_string(s: &PauliString) -> PauliSum {
        let mut out = PauliSum::new(s.num_qubits);
        out.add_term(s.key, s.coeff);
        out
    }

    pub fn from_terms(num_qubits: usize, terms: impl IntoIterator<Item = (PauliKey, C64)>) -> PauliSum {
        let mut out = PauliSum::new(num_qubits);
        for (k, v) in terms {
            out.add_term(k, v);
        }
        out
    }

    pub fn add_term(&mut self, key: PauliKey, coeff: C64) {
        let e = self.terms.entry(key).or_insert(ZERO);
        *e += coeff;
        if *e == ZERO {
            self.terms.remove(&key);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliKey, &C64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &PauliKey) -> C64 {
        self.terms.get(key).copied().unwrap_or(ZERO)
    }

    pub fn strings(&self) -> Vec<PauliString> {
        self.terms.iter().map(|(k, v)| PauliString::new(self.num_qubits, *k, *v)).collect()
    }

    /// Drops entries with modulus at most `tol`.
    pub fn simplify(&mut self, tol: f64) {
        self.terms.retain(|_, v| v.norm() > tol);
    }

    pub fn scale(&self, s: C64) -> PauliSum {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= s;
        }
        out.simplify(0.0);
        out
    }

    pub fn add(&self, other: &PauliSum) -> PauliSum {
        let mut out = self.clone();
        out.num_qubits = out.num_qubits.max(other.num_qubits);
        for (k, v) in &other.terms {
            out.add_term(*k, *v);
        }
        out
    }

    pub fn mul(&self, other: &PauliSum) -> PauliSum {
        let mut out = PauliSum::new(self.num_qubits.max(other.num_qubits));
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let (ph, k) = ka.mul_phase(kb);
                out.add_term(k, va * vb * i_pow(ph));
            }
        }
        out
    }

    pub fn adjoint(&self) -> PauliSum {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.conj();
        }
        out
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|v| v.im.abs() <= tol)
    }

    /// Sum of squared coefficient moduli (the normalized Hilbert–Schmidt norm).
    pub fn two_norm_sqr(&self) -> f64 {
        self.terms.values().map(|v| v.norm_sqr()).sum()
    }

    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|v| v.norm()).sum()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> CMat {
        let dim = 1usize << self.num_qubits;
        let mut m = CMat::zeros(dim, dim);
        for (k, v) in &self.terms {
            m += k.to_dense(self.num_qubits) * *v;
        }
        m
    }

    /// Canonical CSV lines `letters,coefficient` sorted by letter string.
    /// Imaginary parts are dropped; callers hold Hermitian sums.
    pub fn to_csv_rows(&self) -> Vec<(String, f64)> {
        let mut rows: Vec<(String, f64)> =
            self.terms.iter().map(|(k, v)| (k.letters(self.num_qubits), v.re)).collect();
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        rows
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.terms {
            writeln!(f, "{:+.6} {}", v.re, k.letters(self.num_qubits))?;
        }
        Ok(())
    }
}
