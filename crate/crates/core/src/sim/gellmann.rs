// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Generalized Gell-Mann matrices and `U = exp(−i Σ c_j Λ_j)`.
//!
//! Ordering: symmetric off-diagonal generators for `j < k` in lexicographic
//! order, then the antisymmetric ones in the same order, then the diagonal
//! ones `l = 1..dim`. Normalization `tr(Λ_i Λ_j) = 2δ_ij`.

use serde::{Deserialize, Serialize};

use super::gate::UnitaryGate;
use super::linalg::{CMat, C64, ZERO};
use crate::{Error, Result};

/// Version tag written next to serialized coefficients.
pub const ORDERING_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Gen {
    Sym(usize, usize),
    Anti(usize, usize),
    Diag(usize),
}

#[derive(Clone, Debug)]
pub struct GellMannBasis {
    pub dim: usize,
    layout: Vec<Gen>,
}

impl GellMannBasis {
    pub fn new(dim: usize) -> Result<GellMannBasis> {
        if dim < 2 {
            return Err(Error::InvalidArgument(format!("Gell-Mann basis needs dim ≥ 2, got {dim}")));
        }
        let mut layout = Vec::with_capacity(dim * dim - 1);
        for j in 0..dim {
            for k in j + 1..dim {
                layout.push(Gen::Sym(j, k));
            }
        }
        for j in 0..dim {
            for k in j + 1..dim {
                layout.push(Gen::Anti(j, k));
            }
        }
        for l in 1..dim {
            layout.push(Gen::Diag(l));
        }
        Ok(GellMannBasis { dim, layout })
    }

    /// Basis for `k` qubits.
    pub fn for_qubits(k: usize) -> Result<GellMannBasis> {
        GellMannBasis::new(1 << k)
    }

    pub fn len(&self) -> usize {
        self.layout.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layout.is_empty()
    }

    pub fn generator(&self, idx: usize) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        self.accumulate(&mut m, idx, 1.0);
        m
    }

    pub fn generators(&self) -> Vec<CMat> {
        (0..self.len()).map(|i| self.generator(i)).collect()
    }

    fn accumulate(&self, m: &mut CMat, idx: usize, w: f64) {
        match self.layout[idx] {
            Gen::Sym(j, k) => {
                m[(j, k)] += C64::new(w, 0.0);
                m[(k, j)] += C64::new(w, 0.0);
            }
            Gen::Anti(j, k) => {
                m[(j, k)] += C64::new(0.0, -w);
                m[(k, j)] += C64::new(0.0, w);
            }
            Gen::Diag(l) => {
                let s = (2.0 / (l * (l + 1)) as f64).sqrt() * w;
                for i in 0..l {
                    m[(i, i)] += C64::new(s, 0.0);
                }
                m[(l, l)] += C64::new(-(l as f64) * s, 0.0);
            }
        }
    }

    /// `H = Σ c_j Λ_j`, built entrywise.
    pub fn hamiltonian(&self, c: &[f64]) -> Result<CMat> {
        if c.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: c.len() });
        }
        let mut m = CMat::from_element(self.dim, self.dim, ZERO);
        for (idx, &w) in c.iter().enumerate() {
            if w != 0.0 {
                self.accumulate(&mut m, idx, w);
            }
        }
        Ok(m)
    }

    /// `exp(−iH)` through the Hermitian eigendecomposition of `H`.
    pub fn unitary(&self, c: &[f64]) -> Result<CMat> {
        let h = self.hamiltonian(c)?;
        Ok(exp_minus_i_hermitian(h))
    }

    /// Coefficients of a Hermitian traceless matrix: `c_j = tr(Λ_j H)/2`.
    pub fn coefficients(&self, h: &CMat) -> Vec<f64> {
        (0..self.len()).map(|i| (self.generator(i) * h).trace().re / 2.0).collect()
    }

    /// Coefficients reproducing `u` up to a global phase, from the principal
    /// logarithm. Unitaries are normal, so the Schur form is diagonal.
    pub fn params_from_unitary(&self, u: &CMat) -> Result<Vec<f64>> {
        if u.nrows() != self.dim || u.ncols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: u.nrows() });
        }
        let err = super::linalg::unitarity_error(u);
        if err > 1e-8 {
            return Err(Error::NotUnitary(err));
        }
        let (q, t) = nalgebra::linalg::Schur::new(u.clone()).unpack();
        let mut d = CMat::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            d[(i, i)] = C64::new(-t[(i, i)].arg(), 0.0);
        }
        let h = &q * d * q.adjoint();
        Ok(self.coefficients(&h))
    }
}

pub fn exp_minus_i_hermitian(h: CMat) -> CMat {
    let eig = h.symmetric_eigen();
    let v = &eig.eigenvectors;
    let mut vd = v.clone();
    for (j, lam) in eig.eigenvalues.iter().enumerate() {
        let ph = C64::from_polar(1.0, -lam);
        for r in 0..vd.nrows() {
            vd[(r, j)] *= ph;
        }
    }
    vd * v.adjoint()
}

/// Free function form: gate on qubits `0..k` for a basis of dimension `2^k`.
pub fn unitary_from_params(basis: &GellMannBasis, c: &ParamVector) -> Result<UnitaryGate> {
    if c.dim != basis.dim {
        return Err(Error::DimensionMismatch { expected: basis.dim, got: c.dim });
    }
    if !basis.dim.is_power_of_two() {
        return Err(Error::InvalidArgument("gate form needs a power-of-two dimension".into()));
    }
    let u = basis.unitary(&c.coefficients)?;
    let k = basis.dim.trailing_zeros() as usize;
    UnitaryGate::new((0..k).collect(), u)
}

/// Coefficients `c_j` of one Gell-Mann-parameterized unitary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamVector {
    pub dim: usize,
    pub ordering_version: u32,
    pub coefficients: Vec<f64>,
}

impl ParamVector {
    pub fn new(dim: usize, coefficients: Vec<f64>) -> Result<ParamVector> {
        if dim < 2 || coefficients.len() != dim * dim - 1 {
            return Err(Error::DimensionMismatch { expected: dim * dim - 1, got: coefficients.len() });
        }
        Ok(ParamVector { dim, ordering_version: ORDERING_VERSION, coefficients })
    }

    pub fn zeros(dim: usize) -> ParamVector {
        ParamVector { dim, ordering_version: ORDERING_VERSION, coefficients: vec![0.0; dim * dim - 1] }
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<ParamVector> {
        let p: ParamVector = serde_json::from_str(s)?;
        if p.ordering_version != ORDERING_VERSION {
            return Err(Error::Schema(format!("unsupported ordering_version {}", p.ordering_version)));
        }
        ParamVector::new(p.dim, p.coefficients)
    }
}
