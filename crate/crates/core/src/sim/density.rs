// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Mixed states. The column-major buffer of `ρ` is treated as a vector over
//! `2n` qubits: bit `t` is the row index of qubit `t` and bit `t + n` its
//! column index, so gates reuse the statevector stride kernel.

use super::channel::KrausChannel;
use super::gate::UnitaryGate;
use super::linalg::{self, check_targets, CMat, C64, ONE, ZERO};
use super::pauli::PauliSum;
use super::state::StateVector;
use crate::{Error, Result};

pub const TRACE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    mat: CMat,
}

impl DensityMatrix {
    /// Validates shape, unit trace and Hermiticity. Positivity is checked in
    /// debug builds only.
    pub fn new(mat: CMat) -> Result<DensityMatrix> {
        if !mat.is_square() {
            return Err(Error::InvalidArgument("density matrix must be square".into()));
        }
        let n = super::state::log2_exact(mat.nrows())?;
        let tr = mat.trace();
        if (tr - ONE).norm() > TRACE_TOL {
            return Err(Error::InvalidArgument(format!("trace {tr} differs from 1")));
        }
        let h = linalg::hermiticity_error(&mat);
        if h > TRACE_TOL {
            return Err(Error::InvalidArgument(format!("not Hermitian (deviation {h:.3e})")));
        }
        let rho = DensityMatrix { num_qubits: n, mat };
        debug_assert!(rho.num_qubits > 6 || rho.min_eigenvalue() > -1e-9, "density matrix is not PSD");
        Ok(rho)
    }

    pub fn from_pure(psi: &StateVector) -> DensityMatrix {
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        DensityMatrix { num_qubits: psi.num_qubits(), mat: &v * v.adjoint() }
    }

    pub fn zero_state(num_qubits: usize) -> DensityMatrix {
        DensityMatrix::from_pure(&StateVector::zero(num_qubits))
    }

    pub fn maximally_mixed(num_qubits: usize) -> DensityMatrix {
        let dim = 1usize << num_qubits;
        DensityMatrix { num_qubits, mat: CMat::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0) }
    }

    /// Single qubit from a Bloch vector: `(1 + r·σ)/2`.
    pub fn from_bloch(r: [f64; 3]) -> DensityMatrix {
        let m = (linalg::identity(2)
            + linalg::pauli_x() * C64::new(r[0], 0.0)
            + linalg::pauli_y() * C64::new(r[1], 0.0)
            + linalg::pauli_z() * C64::new(r[2], 0.0))
            * C64::new(0.5, 0.0);
        DensityMatrix { num_qubits: 1, mat: m }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        linalg::hermiticity_error(&self.mat)
    }

    /// Smallest eigenvalue; costs a full Hermitian eigendecomposition.
    pub fn min_eigenvalue(&self) -> f64 {
        self.mat.clone().symmetric_eigen().eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }

    /// `ρ ↦ MρM†` for any matrix `M` on the targets.
    pub fn apply_matrix(&mut self, targets: &[usize], m: &CMat) -> Result<()> {
        check_targets(targets, self.num_qubits)?;
        let dim = 1usize << targets.len();
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: m.nrows() });
        }
        self.conjugate_unchecked(targets, &linalg::row_major(m));
        Ok(())
    }

    pub(crate) fn conjugate_unchecked(&mut self, targets: &[usize], m_row_major: &[C64]) {
        let n = self.num_qubits;
        let cols: Vec<usize> = targets.iter().map(|t| t + n).collect();
        let mc: Vec<C64> = m_row_major.iter().map(|z| z.conj()).collect();
        let data = self.mat.as_mut_slice();
        linalg::apply_kernel(data, targets, m_row_major);
        linalg::apply_kernel(data, &cols, &mc);
    }

    pub fn apply(&mut self, gate: &UnitaryGate) -> Result<()> {
        self.apply_matrix(&gate.targets, &gate.matrix)
    }

    pub fn apply_channel(&mut self, ch: &KrausChannel) -> Result<()> {
        check_targets(&ch.targets, self.num_qubits)?;
        let mut acc = CMat::zeros(self.mat.nrows(), self.mat.ncols());
        for k in &ch.kraus_ops {
            let mut part = self.clone();
            part.conjugate_unchecked(&ch.targets, &linalg::row_major(k));
            acc += part.mat;
        }
        self.mat = acc;
        Ok(())
    }

    /// Applies a linear map on 2×2 operators to qubit `q`, given by its
    /// action on the matrix units `|a⟩⟨b|`.
    pub fn apply_local_map<F>(&mut self, q: usize, map: F) -> Result<()>
    where
        F: Fn(&CMat) -> CMat,
    {
        check_targets(&[q], self.num_qubits)?;
        let mut t = Vec::with_capacity(4);
        for a in 0..2 {
            for b in 0..2 {
                let mut e = CMat::zeros(2, 2);
                e[(a, b)] = ONE;
                t.push(map(&e));
            }
        }
        let dim = self.mat.nrows();
        let bit = 1usize << q;
        let mut out = CMat::zeros(dim, dim);
        for c in 0..dim {
            let (b, c0) = ((c >> q) & 1, c & !bit);
            for r in 0..dim {
                let v = self.mat[(r, c)];
                if v == ZERO {
                    continue;
                }
                let (a, r0) = ((r >> q) & 1, r & !bit);
                let m = &t[2 * a + b];
                for cc in 0..2 {
                    for rr in 0..2 {
                        out[(r0 | (rr << q), c0 | (cc << q))] += m[(rr, cc)] * v;
                    }
                }
            }
        }
        self.mat = out;
        Ok(())
    }

    /// Reduced state on `keep`; `keep[j]` becomes qubit `j` of the result.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::InvalidArgument("partial trace needs a nonempty keep set".into()));
        }
        check_targets(keep, self.num_qubits)?;
        let traced: Vec<usize> = (0..self.num_qubits).filter(|q| !keep.contains(q)).collect();
        let k = keep.len();
        let dk = 1usize << k;
        let dt = 1usize << traced.len();
        let spread = |bits: usize, pos: &[usize]| -> usize {
            pos.iter().enumerate().fold(0usize, |acc, (j, &q)| acc | (((bits >> j) & 1) << q))
        };
        let keep_idx: Vec<usize> = (0..dk).map(|b| spread(b, keep)).collect();
        let tr_idx: Vec<usize> = (0..dt).map(|b| spread(b, &traced)).collect();
        let mut out = CMat::zeros(dk, dk);
        for c in 0..dk {
            for r in 0..dk {
                let mut acc = ZERO;
                for &t in &tr_idx {
                    acc += self.mat[(keep_idx[r] | t, keep_idx[c] | t)];
                }
                out[(r, c)] = acc;
            }
        }
        Ok(DensityMatrix { num_qubits: k, mat: out })
    }

    /// `tr(ρ·obs)` without forming the dense observable.
    pub fn expectation(&self, obs: &PauliSum) -> Result<f64> {
        if obs.num_qubits > self.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.num_qubits, got: obs.num_qubits });
        }
        let dim = self.mat.nrows();
        let mut acc = ZERO;
        for (key, v) in obs.iter() {
            let x = key.x as usize;
            let mut t = ZERO;
            for i in 0..dim {
                t += key.basis_phase(i) * self.mat[(i, i ^ x)];
            }
            acc += t * v;
        }
        Ok(acc.re)
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity_pure(&self, psi: &StateVector) -> f64 {
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        (v.adjoint() * &self.mat * &v)[(0, 0)].re
    }

    /// Bloch vector of a single-qubit state.
    pub fn bloch(&self) -> Result<[f64; 3]> {
        if self.num_qubits != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: self.num_qubits });
        }
        let m = &self.mat;
        Ok([2.0 * m[(1, 0)].re, 2.0 * m[(1, 0)].im, (m[(0, 0)] - m[(1, 1)]).re])
    }

    /// `self ⊗ other` with `other` on the higher qubits.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix { num_qubits: self.num_qubits + other.num_qubits, mat: other.mat.kronecker(&self.mat) }
    }
}

pub fn apply_channel(rho: &DensityMatrix, ch: &KrausChannel) -> Result<DensityMatrix> {
    let mut out = rho.clone();
    out.apply_channel(ch)?;
    Ok(out)
}

pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    rho.partial_trace(keep)
}
