// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Restarted Lanczos with full reorthogonalization.
//!
//! Each cycle builds a Krylov basis of at most `krylov_dim` vectors,
//! diagonalizes the tridiagonal projection and restarts from the lowest Ritz
//! vector. Optional constraints (a symmetry projector, deflation against known
//! eigenvectors) are reapplied to every new basis vector so round-off cannot
//! leak out of the target subspace.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::hamiltonian::{random_vector, SparseHamiltonian};
use crate::sim::linalg::{C64, ZERO};
use crate::sim::{PauliKey, StateVector};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LanczosConfig {
    /// Residual target relative to `norm_bound()` of the Hamiltonian.
    pub tol: f64,
    pub krylov_dim: usize,
    pub max_restarts: usize,
    pub seed: u64,
    /// Project onto the +1 sector of these commuting Pauli symmetries.
    pub symmetries: Vec<PauliKey>,
    /// Also compute the first excitation inside the same sector.
    pub compute_gap: bool,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        LanczosConfig { tol: 1e-10, krylov_dim: 40, max_restarts: 200, seed: 0, symmetries: Vec::new(), compute_gap: false }
    }
}

#[derive(Clone, Debug)]
pub struct GroundState {
    pub energy: f64,
    pub state: StateVector,
    pub residual: f64,
    /// Matrix-vector products used.
    pub matvecs: usize,
    pub gap: Option<f64>,
    /// Set when the computed gap is below `10 · tol · norm_bound`.
    pub degenerate: bool,
}

struct Constraints<'a> {
    symmetries: &'a [PauliKey],
    deflate: &'a [Vec<C64>],
}

impl Constraints<'_> {
    fn apply(&self, v: &mut [C64]) {
        for key in self.symmetries {
            // v ← (1 + P) v / 2
            if key.z == 0 && key.x != 0 {
                let x = key.x as usize;
                let top = 1usize << (usize::BITS - 1 - x.leading_zeros());
                for i in (0..v.len()).filter(|i| i & top == 0) {
                    let m = (v[i] + v[i ^ x]) * 0.5;
                    v[i] = m;
                    v[i ^ x] = m;
                }
            } else {
                let pv = pauli_apply(key, v);
                for (a, b) in v.iter_mut().zip(&pv) {
                    *a = (*a + b) * 0.5;
                }
            }
        }
        for g in self.deflate {
            let ov = dot(g, v);
            for (a, b) in v.iter_mut().zip(g) {
                *a -= ov * b;
            }
        }
    }
}

pub(crate) fn pauli_apply(key: &PauliKey, v: &[C64]) -> Vec<C64> {
    let mut out = vec![ZERO; v.len()];
    let x = key.x as usize;
    for (i, a) in v.iter().enumerate() {
        out[i ^ x] = key.basis_phase(i) * a;
    }
    out
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn lowest_eigenpair(h: &SparseHamiltonian, cfg: &LanczosConfig, deflate: &[Vec<C64>], start: Vec<C64>) -> Result<(f64, Vec<C64>, f64, usize)> {
    let cons = Constraints { symmetries: &cfg.symmetries, deflate };
    let scale = h.norm_bound().max(1e-300);
    let m_max = cfg.krylov_dim.clamp(2, h.dim().max(2));
    let mut v = start;
    cons.apply(&mut v);
    let n0 = norm(&v);
    if n0 < 1e-12 {
        return Err(Error::InvalidArgument("start vector vanishes in the constrained subspace".into()));
    }
    v.iter_mut().for_each(|a| *a /= n0);
    let mut matvecs = 0;
    let mut last = (f64::NAN, f64::INFINITY);
    for _ in 0..=cfg.max_restarts {
        let mut basis: Vec<Vec<C64>> = vec![v.clone()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut w = vec![ZERO; h.dim()];
        loop {
            let j = basis.len() - 1;
            h.apply(&basis[j], &mut w);
            matvecs += 1;
            let a = dot(&basis[j], &w).re;
            alpha.push(a);
            // full reorthogonalization; a second sweep only when the first
            // removed most of the vector
            let mut before = norm(&w);
            for _ in 0..2 {
                for b in &basis {
                    let ov = dot(b, &w);
                    for (x, y) in w.iter_mut().zip(b) {
                        *x -= ov * y;
                    }
                }
                let after = norm(&w);
                if after > 0.7 * before {
                    break;
                }
                before = after;
            }
            cons.apply(&mut w);
            let bn = norm(&w);
            if basis.len() >= m_max || bn < 1e-14 * scale {
                break;
            }
            beta.push(bn);
            basis.push(w.iter().map(|x| x / bn).collect());
        }
        let m = alpha.len();
        let mut t = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = alpha[i];
            if i + 1 < m {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = t.symmetric_eigen();
        let (k, _) = eig.eigenvalues.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("nonempty");
        let y: DVector<f64> = eig.eigenvectors.column(k).into_owned();
        let mut ritz = vec![ZERO; h.dim()];
        for (c, b) in y.iter().zip(&basis) {
            for (r, x) in ritz.iter_mut().zip(b) {
                *r += x * *c;
            }
        }
        cons.apply(&mut ritz);
        let rn = norm(&ritz);
        ritz.iter_mut().for_each(|a| *a /= rn);
        h.apply(&ritz, &mut w);
        matvecs += 1;
        let energy = dot(&ritz, &w).re;
        let residual = w.iter().zip(&ritz).map(|(a, b)| (a - b * energy).norm_sqr()).sum::<f64>().sqrt();
        last = (energy, residual);
        if residual <= cfg.tol * scale {
            return Ok((energy, ritz, residual, matvecs));
        }
        v = ritz;
    }
    Err(Error::NoConvergence { iterations: matvecs, residual: last.1 })
}

/// Lowest eigenpair of `h` within the configured symmetry sector.
pub fn ground_state(h: &SparseHamiltonian, cfg: &LanczosConfig) -> Result<GroundState> {
    if !h.dim().is_power_of_two() {
        return Err(Error::InvalidArgument("ground_state returns qubit states; use ground_vector for other local dimensions".into()));
    }
    let (energy, vec, residual, matvecs, gap) = ground_vector(h, cfg)?;
    let scale = h.norm_bound();
    Ok(GroundState {
        energy,
        state: StateVector::normalized(vec)?,
        residual,
        matvecs,
        gap,
        degenerate: gap.is_some_and(|g| g < 10.0 * cfg.tol * scale),
    })
}

/// Raw eigenvector form for any local dimension: (energy, vector, residual, matvecs, gap).
pub fn ground_vector(h: &SparseHamiltonian, cfg: &LanczosConfig) -> Result<(f64, Vec<C64>, f64, usize, Option<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let start = random_vector(h.dim(), &mut rng);
    let (e0, g0, r0, mv0) = lowest_eigenpair(h, cfg, &[], start)?;
    let (gap, mv1) = if cfg.compute_gap {
        let start = random_vector(h.dim(), &mut rng);
        let defl = [g0.clone()];
        match lowest_eigenpair(h, cfg, &defl, start) {
            Ok((e1, _, _, mv)) => (Some(e1 - e0), mv),
            Err(Error::InvalidArgument(_)) => (None, 0),
            Err(e) => return Err(e),
        }
    } else {
        (None, 0)
    };
    Ok((e0, g0, r0, mv0 + mv1, gap))
}
