// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Pure states over `n` qubits. Qubit 0 is the least significant bit of
//! the amplitude index.

use rand::Rng;
use rand_distr::StandardNormal;

use super::density::DensityMatrix;
use super::gate::{Basis, UnitaryGate};
use super::linalg::{self, check_targets, CMat, C64, ONE, ZERO};
use super::pauli::{PauliKey, PauliString, PauliSum};
use crate::{Error, Result};

/// Norm tolerance of the state invariant.
pub const NORM_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// |0…0⟩.
    pub fn zero(num_qubits: usize) -> StateVector {
        StateVector::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> StateVector {
        let mut amps = vec![ZERO; 1 << num_qubits];
        amps[index] = ONE;
        StateVector { num_qubits, amps }
    }

    /// |+⟩^⊗n.
    pub fn plus(num_qubits: usize) -> StateVector {
        let dim = 1usize << num_qubits;
        let a = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        StateVector { num_qubits, amps: vec![a; dim] }
    }

    /// Requires a power-of-two length and unit norm within `NORM_TOL`.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<StateVector> {
        let n = log2_exact(amps.len())?;
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!("state norm² is {norm}, expected 1")));
        }
        Ok(StateVector { num_qubits: n, amps })
    }

    /// Rescales to unit norm. Fails on the zero vector.
    pub fn normalized(amps: Vec<C64>) -> Result<StateVector> {
        let n = log2_exact(amps.len())?;
        let mut s = StateVector { num_qubits: n, amps };
        let norm = s.norm_sqr().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidArgument("cannot normalize a zero vector".into()));
        }
        s.scale(1.0 / norm);
        Ok(s)
    }

    /// Haar-random state from complex Gaussian amplitudes.
    pub fn random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> StateVector {
        let amps: Vec<C64> = (0..1usize << num_qubits).map(|_| gaussian_c64(rng)).collect();
        StateVector::normalized(amps).expect("gaussian vector is nonzero")
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn scale(&mut self, s: f64) {
        for a in &mut self.amps {
            *a *= s;
        }
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps.iter().zip(other.amps.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn apply(&mut self, gate: &UnitaryGate) -> Result<()> {
        check_targets(&gate.targets, self.num_qubits)?;
        linalg::apply_kernel(&mut self.amps, &gate.targets, &linalg::row_major(&gate.matrix));
        debug_assert!((self.norm_sqr() - 1.0).abs() < 1e-8, "norm drift after gate");
        Ok(())
    }

    /// Applies any matrix, unitary or not, on the targets.
    pub fn apply_matrix(&mut self, targets: &[usize], m: &CMat) -> Result<()> {
        check_targets(targets, self.num_qubits)?;
        let dim = 1usize << targets.len();
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: m.nrows() });
        }
        linalg::apply_kernel(&mut self.amps, targets, &linalg::row_major(m));
        Ok(())
    }

    pub fn apply_pauli(&mut self, key: &PauliKey) {
        let x = key.x as usize;
        let mut out = vec![ZERO; self.amps.len()];
        for (i, a) in self.amps.iter().enumerate() {
            out[i ^ x] = key.basis_phase(i) * a;
        }
        self.amps = out;
    }

    /// `⟨ψ|P|ψ⟩` for one string, coefficient included.
    pub fn expectation_string(&self, s: &PauliString) -> C64 {
        expectation_key(&self.amps, &s.key) * s.coeff
    }

    pub fn expectation(&self, obs: &PauliSum) -> Result<f64> {
        if obs.num_qubits > self.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.num_qubits, got: obs.num_qubits });
        }
        let mut acc = ZERO;
        for (k, v) in obs.iter() {
            acc += expectation_key(&self.amps, k) * v;
        }
        Ok(acc.re)
    }

    /// Probability of `outcome` (±1) for `qubit` measured in `basis`.
    pub fn probability(&self, qubit: usize, basis: Basis, outcome: i8) -> Result<f64> {
        check_targets(&[qubit], self.num_qubits)?;
        let e = expectation_key(&self.amps, &PauliKey::single(qubit, basis.pauli())).re;
        Ok(((1.0 + outcome as f64 * e) / 2.0).clamp(0.0, 1.0))
    }

    /// Projects onto `outcome` and renormalizes. Returns the branch probability.
    pub fn project(&mut self, qubit: usize, basis: Basis, outcome: i8) -> Result<f64> {
        let p = self.probability(qubit, basis, outcome)?;
        if p < 1e-14 {
            return Err(Error::ZeroProbability { qubit, outcome });
        }
        linalg::apply_kernel(&mut self.amps, &[qubit], &linalg::row_major(&basis.projector(outcome)));
        self.scale(1.0 / p.sqrt());
        Ok(p)
    }

    /// Samples a projective measurement and collapses in place.
    pub fn measure<R: Rng + ?Sized>(&mut self, qubit: usize, basis: Basis, rng: &mut R) -> Result<(i8, f64)> {
        let p_plus = self.probability(qubit, basis, 1)?;
        let outcome = if rng.random::<f64>() < p_plus { 1 } else { -1 };
        let p = self.project(qubit, basis, outcome)?;
        Ok((outcome, p))
    }

    /// Removes `qubit`, which must already sit in the `outcome` eigenstate of
    /// `basis`. Higher qubits shift down by one.
    pub fn remove_qubit(&self, qubit: usize, basis: Basis, outcome: i8) -> Result<StateVector> {
        check_targets(&[qubit], self.num_qubits)?;
        // amplitude of the remaining register is ⟨e|_q ψ⟩ with e the eigenvector
        let e: [C64; 2] = match (basis, outcome) {
            (Basis::Z, 1) => [ONE, ZERO],
            (Basis::Z, _) => [ZERO, ONE],
            (Basis::X, 1) => [C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0); 2],
            (Basis::X, _) => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                [C64::new(s, 0.0), C64::new(-s, 0.0)]
            }
            (Basis::Y, o) => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                [C64::new(s, 0.0), C64::new(0.0, s * o as f64)]
            }
        };
        let half = self.amps.len() / 2;
        let mut out = Vec::with_capacity(half);
        for j in 0..half {
            let i0 = linalg::insert_zero_bits(j, &[qubit]);
            out.push(e[0].conj() * self.amps[i0] + e[1].conj() * self.amps[i0 | (1 << qubit)]);
        }
        StateVector::normalized(out)
    }

    /// Reduced density matrix on `keep`; bit `j` of its index is `keep[j]`.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<CMat> {
        check_targets(keep, self.num_qubits)?;
        let k = keep.len();
        let mut rest_pos = Vec::with_capacity(self.num_qubits - k);
        for q in 0..self.num_qubits {
            if !keep.contains(&q) {
                rest_pos.push(q);
            }
        }
        let dk = 1usize << k;
        let dr = 1usize << rest_pos.len();
        // columns of `blocks` are the kept-register vectors for each rest index
        let mut blocks = vec![ZERO; dk * dr];
        for (i, a) in self.amps.iter().enumerate() {
            let mut kb = 0;
            for (j, &q) in keep.iter().enumerate() {
                kb |= ((i >> q) & 1) << j;
            }
            let mut rb = 0;
            for (j, &q) in rest_pos.iter().enumerate() {
                rb |= ((i >> q) & 1) << j;
            }
            blocks[rb * dk + kb] = *a;
        }
        let mut rho = CMat::zeros(dk, dk);
        for v in blocks.chunks_exact(dk) {
            for b in 0..dk {
                let cb = v[b].conj();
                if cb == ZERO {
                    continue;
                }
                for a in 0..dk {
                    rho[(a, b)] += v[a] * cb;
                }
            }
        }
        Ok(rho)
    }

    /// Tensor product with `other` on the higher qubits.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for b in &other.amps {
            for a in &self.amps {
                amps.push(a * b);
            }
        }
        StateVector { num_qubits: self.num_qubits + other.num_qubits, amps }
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }
}

/// Spec-shaped wrapper: measures a copy and returns `(outcome, collapsed, probability)`.
pub fn measure_qubit<R: Rng + ?Sized>(
    state: &StateVector,
    qubit: usize,
    basis: Basis,
    rng: &mut R,
) -> Result<(i8, StateVector, f64)> {
    let mut s = state.clone();
    let (o, p) = s.measure(qubit, basis, rng)?;
    Ok((o, s, p))
}

pub(crate) fn expectation_key(amps: &[C64], key: &PauliKey) -> C64 {
    let x = key.x as usize;
    let mut acc = ZERO;
    for (i, a) in amps.iter().enumerate() {
        acc += amps[i ^ x].conj() * key.basis_phase(i) * a;
    }
    acc
}

pub(crate) fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub(crate) fn log2_exact(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("length {len} is not a power of two")));
    }
    Ok(len.trailing_zeros() as usize)
}
