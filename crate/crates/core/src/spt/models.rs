// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Cluster-Ising chain, string order parameters and the spin-1 Haldane chain.
//!
//! Sites and qubits are 0-based throughout: the shortest string order
//! parameter on the first three sites is `sop(0, 2, n)`.

use serde::{Deserialize, Serialize};

use super::hamiltonian::{LocalTerm, SparseHamiltonian, DEFAULT_DIM_CAP};
use super::lanczos::{ground_state, ground_vector, GroundState, LanczosConfig};
use crate::sim::linalg::{CMat, C64, ZERO};
use crate::sim::{Pauli, PauliKey, PauliString, StateVector};
use crate::{Error, Result};

/// `H = −J Σ Z_i X_{i+1} Z_{i+2} − h₁ Σ X_i − h₂ Σ X_i X_{i+1}`, open chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterParams {
    pub j: f64,
    pub h1: f64,
    pub h2: f64,
    pub n: usize,
}

impl ClusterParams {
    pub fn new(n: usize, h1: f64, h2: f64) -> ClusterParams {
        ClusterParams { j: 1.0, h1, h2, n }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::InvalidArgument(format!("cluster chain needs N ≥ 3, got {}", self.n)));
        }
        if self.j <= 0.0 || !self.j.is_finite() {
            return Err(Error::InvalidArgument("J must be positive".into()));
        }
        Ok(())
    }
}

pub fn build_cluster_hamiltonian(p: &ClusterParams) -> Result<SparseHamiltonian> {
    build_cluster_hamiltonian_capped(p, DEFAULT_DIM_CAP)
}

pub fn build_cluster_hamiltonian_capped(p: &ClusterParams, cap: usize) -> Result<SparseHamiltonian> {
    p.validate()?;
    let n = p.n;
    let mut terms = Vec::with_capacity(3 * n);
    for i in 0..n - 2 {
        let mut k = PauliKey::single(i, Pauli::Z);
        k.set(i + 1, Pauli::X);
        k.set(i + 2, Pauli::Z);
        terms.push((k, -p.j));
    }
    for i in 0..n {
        terms.push((PauliKey::single(i, Pauli::X), -p.h1));
    }
    for i in 0..n - 1 {
        let mut k = PauliKey::single(i, Pauli::X);
        k.set(i + 1, Pauli::X);
        terms.push((k, -p.h2));
    }
    SparseHamiltonian::from_pauli_terms(n, terms, cap)
}

/// Product of X over the sites with the given parity (0 = even, 1 = odd).
pub fn x_parity(n: usize, parity: usize) -> PauliKey {
    let mut k = PauliKey::IDENTITY;
    for q in (parity..n).step_by(2) {
        k.set(q, Pauli::X);
    }
    k
}

/// Lanczos settings projecting onto the `X_even = X_odd = +1` sector.
pub fn symmetric_sector_config(n: usize, seed: u64) -> LanczosConfig {
    LanczosConfig { symmetries: vec![x_parity(n, 0), x_parity(n, 1)], seed, ..LanczosConfig::default() }
}

/// Symmetric-sector ground state of the cluster-Ising chain.
pub fn cluster_ground_state(p: &ClusterParams, seed: u64) -> Result<GroundState> {
    ground_state(&build_cluster_hamiltonian(p)?, &symmetric_sector_config(p.n, seed))
}

/// `|+⟩^⊗n` followed by CZ on all neighbouring pairs, written down directly:
/// the amplitude of `|i⟩` is `2^{−n/2} (−1)^{#adjacent 1-pairs in i}`.
pub fn cluster_state(n: usize) -> StateVector {
    let dim = 1usize << n;
    let a = (dim as f64).sqrt().recip();
    let amps = (0..dim)
        .map(|i| if (i & (i >> 1)).count_ones() % 2 == 0 { C64::new(a, 0.0) } else { C64::new(-a, 0.0) })
        .collect();
    StateVector::from_amplitudes(amps).expect("normalized by construction")
}

/// `S_ab = Z_a X_{a+1} X_{a+3} … X_{b−1} Z_b`.
pub fn sop(a: usize, b: usize, n: usize) -> Result<PauliString> {
    if b < a + 2 || (b - a) % 2 != 0 {
        return Err(Error::InvalidArgument(format!("string order parameter needs b − a even and ≥ 2, got a={a}, b={b}")));
    }
    if b >= n {
        return Err(Error::QubitOutOfRange { qubit: b, num_qubits: n });
    }
    let mut sites = vec![(a, Pauli::Z), (b, Pauli::Z)];
    sites.extend((a + 1..b).step_by(2).map(|q| (q, Pauli::X)));
    Ok(PauliString::from_sites(n, &sites))
}

/// Centered string of about half the chain: endpoints `a`, `a + 2k` with
/// `2k = ⌊n/2⌋` rounded down to even and at least 2.
pub fn central_sop(n: usize) -> Result<PauliString> {
    let len = ((n / 2) & !1).max(2);
    let a = (n - 1 - len) / 2;
    sop(a, a + len, n)
}

/// `H = J Σ S_j·S_{j+1} + ω Σ (S_j^z)²`, open chain of spin-1 sites.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HaldaneParams {
    pub j: f64,
    pub omega: f64,
    pub n: usize,
}

/// Spin-1 operators in the `S^z` basis ordered (+1, 0, −1).
pub fn spin1_operators() -> [CMat; 3] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let r = |v: f64| C64::new(v, 0.0);
    let sx = CMat::from_row_slice(3, 3, &[ZERO, r(s), ZERO, r(s), ZERO, r(s), ZERO, r(s), ZERO]);
    let sy = CMat::from_row_slice(
        3,
        3,
        &[ZERO, C64::new(0.0, -s), ZERO, C64::new(0.0, s), ZERO, C64::new(0.0, -s), ZERO, C64::new(0.0, s), ZERO],
    );
    let sz = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![r(1.0), ZERO, r(-1.0)]));
    [sx, sy, sz]
}

pub fn build_haldane_hamiltonian(p: &HaldaneParams, cap: usize) -> Result<SparseHamiltonian> {
    if p.n < 2 {
        return Err(Error::InvalidArgument(format!("Haldane chain needs N ≥ 2, got {}", p.n)));
    }
    let ops = spin1_operators();
    let mut ss = CMat::zeros(9, 9);
    for s in &ops {
        // local index = m_j + 3 m_{j+1}: kron(second, first)
        ss += s.kronecker(s);
    }
    let sz2 = &ops[2] * &ops[2];
    let mut terms = Vec::new();
    for j in 0..p.n - 1 {
        terms.push(LocalTerm { sites: vec![j, j + 1], matrix: &ss * C64::new(p.j, 0.0) });
    }
    if p.omega != 0.0 {
        for j in 0..p.n {
            terms.push(LocalTerm { sites: vec![j], matrix: &sz2 * C64::new(p.omega, 0.0) });
        }
    }
    SparseHamiltonian::from_local_terms(p.n, 3, terms, cap)
}

/// Ground state of the Haldane chain as a vector over `3^N`.
pub fn haldane_ground_state(p: &HaldaneParams, cap: usize, seed: u64) -> Result<(f64, Vec<C64>)> {
    let h = build_haldane_hamiltonian(p, cap)?;
    let cfg = LanczosConfig { seed, ..LanczosConfig::default() };
    let (e, v, _, _, _) = ground_vector(&h, &cfg)?;
    Ok((e, v))
}

/// Cartesian spin-1 states |x⟩, |y⟩, |z⟩ in the S^z basis, fixed by
/// `R_ν|μ⟩ = (−1)^{δ_{μν}+1}|μ⟩` for the π rotations `R_ν`.
pub fn cartesian_states() -> [[C64; 3]; 3] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [
        [C64::new(-s, 0.0), ZERO, C64::new(s, 0.0)],
        [C64::new(0.0, s), ZERO, C64::new(0.0, s)],
        [ZERO, C64::new(1.0, 0.0), ZERO],
    ]
}

/// π rotation `exp(−iπ S^ν)` for ν ∈ {0, 1, 2} = {x, y, z}.
pub fn pi_rotation(axis: usize) -> CMat {
    let ops = spin1_operators();
    let eig = ops[axis].clone().symmetric_eigen();
    let mut d = eig.eigenvectors.clone();
    for (j, lam) in eig.eigenvalues.iter().enumerate() {
        let ph = C64::from_polar(1.0, -std::f64::consts::PI * lam);
        for r in 0..3 {
            d[(r, j)] *= ph;
        }
    }
    d * eig.eigenvectors.adjoint()
}

/// 4×3 isometry of one site: |x⟩ ↦ |+−⟩, |y⟩ ↦ −|−+⟩, |z⟩ ↦ −i|−−⟩. Qubit
/// `2j` is the first letter, `2j+1` the second.
pub fn embedding_isometry() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = [s, s];
    let minus = [s, -s];
    // two-qubit index = a + 2b for first qubit a, second b
    let pair = |a: [f64; 2], b: [f64; 2]| -> [C64; 4] {
        let mut v = [ZERO; 4];
        for i in 0..2 {
            for k in 0..2 {
                v[i + 2 * k] = C64::new(a[i] * b[k], 0.0);
            }
        }
        v
    };
    let images = [
        pair(plus, minus),
        pair(minus, plus).map(|z| -z),
        pair(minus, minus).map(|z| z * C64::new(0.0, -1.0)),
    ];
    let cart = cartesian_states();
    let mut t = CMat::zeros(4, 3);
    for (img, mu) in images.iter().zip(cart.iter()) {
        for r in 0..4 {
            for c in 0..3 {
                t[(r, c)] += img[r] * mu[c].conj();
            }
        }
    }
    t
}

/// Embeds a spin-1 chain state over `3^N` into `2N` qubits.
pub fn spin1_embed(psi: &[C64], n_sites: usize) -> Result<StateVector> {
    let want = 3usize.pow(n_sites as u32);
    if psi.len() != want {
        return Err(Error::DimensionMismatch { expected: want, got: psi.len() });
    }
    let t = embedding_isometry();
    let mut cur: Vec<C64> = psi.to_vec();
    // replace site j's trit by two qubits, one site at a time
    for j in 0..n_sites {
        let lo = 4usize.pow(j as u32);
        let hi = 3usize.pow((n_sites - j - 1) as u32);
        let mut next = vec![ZERO; lo * 4 * hi];
        for h in 0..hi {
            for m in 0..3 {
                for l in 0..lo {
                    let a = cur[l + lo * (m + 3 * h)];
                    if a == ZERO {
                        continue;
                    }
                    for r in 0..4 {
                        next[l + lo * (r + 4 * h)] += t[(r, m)] * a;
                    }
                }
            }
        }
        cur = next;
    }
    StateVector::from_amplitudes(cur)
}
