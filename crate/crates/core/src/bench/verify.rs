// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! The invariant suite behind `qcnn verify`.

use std::time::Instant;

use nalgebra::SymmetricEigen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::resources::resource_count;
use crate::exact::{build_exact_circuit, run_deferred, verify_construction_criteria};
use crate::heisenberg::{multiscale_sop, Dyadic};
use crate::qec::{decode, encode, identity_baseline, logical_rate, CodeUnitaries, ErrorModel};
use crate::qec::code::six_states;
use crate::qec::channel::fidelity_from_map;
use crate::sim::{gate, BlochAffineMap, GellMannBasis, KrausChannel, Pauli, StateVector};
use crate::spt::{build_cluster_hamiltonian, ground_state, ClusterParams, LanczosConfig};
use crate::train::{finite_diff_gradient, finite_diff_gradient_4pt, generate_training_set, Line, QcnnHyperparams, TrainableCircuit};
use crate::Result;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

type CheckFn = fn(u64) -> Result<(bool, String)>;

/// Every check, in order. An `Err` from a check counts as a failure.
pub fn checks() -> Vec<(&'static str, CheckFn)> {
    vec![
        ("exact circuit criteria, N=9 d=1", |_| construction(9, 1)),
        ("exact circuit criteria, N=18 d=1", |_| construction(18, 1)),
        ("exact circuit criteria, N=27 d=2", |_| construction(27, 2)),
        ("multiscale SOP norm", sop_norm),
        ("multiscale SOP vs deferred run", sop_vs_deferred),
        ("Gell-Mann orthogonality and count", gell_mann),
        ("parameter round trip", param_round_trip),
        ("Kraus completeness", kraus),
        ("Lanczos vs dense, N=8", lanczos_vs_dense),
        ("gradient stencils", gradient_stencils),
        ("resource count breakdown", resources),
        ("Shor code corrects single Paulis", shor_single_errors),
        ("logical-rate identities", logical_identities),
    ]
}

pub fn run_verify(seed: u64) -> VerifyReport {
    run_selected(seed, |_| true)
}

pub fn run_selected<P: Fn(&str) -> bool>(seed: u64, keep: P) -> VerifyReport {
    let checks = checks()
        .into_iter()
        .filter(|(name, _)| keep(name))
        .map(|(name, f)| {
            let t = Instant::now();
            let (passed, detail) = f(seed).unwrap_or_else(|e| (false, format!("error: {e}")));
            Check { name: name.into(), passed, detail, seconds: t.elapsed().as_secs_f64() }
        })
        .collect();
    VerifyReport { checks }
}

fn construction(n: usize, d: usize) -> Result<(bool, String)> {
    let r = verify_construction_criteria(&build_exact_circuit(n, d)?, n, d)?;
    let f = r.failures();
    Ok((f.is_empty(), if f.is_empty() { format!("{} error sites, {:?} route", r.qec.len(), r.route) } else { f.join("; ") }))
}

fn sop_norm(_: u64) -> Result<(bool, String)> {
    let mut detail = Vec::new();
    let mut ok = true;
    for n in [9, 18] {
        let o = multiscale_sop(n, 1)?;
        let norm = o.operator.two_norm_sqr();
        ok &= norm == Dyadic::ONE;
        detail.push(format!("N={n}: {} terms, norm² {norm}", o.operator.len()));
    }
    Ok((ok, detail.join(", ")))
}

fn sop_vs_deferred(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for (n, count) in [(9, 10), (18, 3)] {
        let o = multiscale_sop(n, 1)?;
        let c = build_exact_circuit(n, 1)?;
        for _ in 0..count {
            let s = StateVector::random(n, &mut rng);
            worst = worst.max((o.expectation(&s)? - run_deferred(&s, &c)?.expectation).abs());
        }
    }
    Ok((worst < 1e-8, format!("largest difference {worst:.2e}")))
}

fn gell_mann(_: u64) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for dim in [2, 4, 8, 32] {
        let b = GellMannBasis::new(dim)?;
        ok &= b.len() == dim * dim - 1;
        let g = b.generators();
        for i in 0..g.len() {
            worst = worst.max(g[i].trace().norm());
            for j in i..g.len() {
                let ip: f64 = g[i].iter().zip(g[j].iter()).map(|(a, c)| (a.conj() * c).re).sum();
                worst = worst.max((ip - if i == j { 2.0 } else { 0.0 }).abs());
            }
        }
    }
    Ok((ok && worst < 1e-12, format!("largest deviation {worst:.2e}")))
}

fn param_round_trip(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for dim in [2, 4, 8] {
        let b = GellMannBasis::new(dim)?;
        for _ in 0..5 {
            // small enough that the spectrum of H stays inside (−π, π)
            let c: Vec<f64> = (0..b.len()).map(|_| rng.random_range(-0.3..0.3) / dim as f64).collect();
            let back = b.params_from_unitary(&b.unitary(&c)?)?;
            worst = worst.max(c.iter().zip(&back).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
        }
    }
    Ok((worst < 1e-8, format!("largest coefficient error {worst:.2e}")))
}

fn kraus(_: u64) -> Result<(bool, String)> {
    let chans = [KrausChannel::pauli(0, 0.1, 0.2, 0.3)?, KrausChannel::pauli(1, 0.0, 0.0, 0.0)?, KrausChannel::correlated_xx(0, 1, 0.25)?];
    let worst = chans.iter().map(KrausChannel::completeness_error).fold(0.0, f64::max);
    Ok((worst < 1e-12, format!("largest deviation {worst:.2e}")))
}

fn lanczos_vs_dense(seed: u64) -> Result<(bool, String)> {
    let h = build_cluster_hamiltonian(&ClusterParams::new(8, 0.7, 0.3))?;
    let e_l = ground_state(&h, &LanczosConfig { seed, ..LanczosConfig::default() })?.energy;
    let e_d = SymmetricEigen::new(h.to_dense()).eigenvalues.min();
    let diff = (e_l - e_d).abs();
    Ok((diff < 1e-8, format!("Lanczos {e_l:.12}, dense {e_d:.12}")))
}

fn gradient_stencils(seed: u64) -> Result<(bool, String)> {
    let h = QcnnHyperparams::new(3, 1, 9)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = TrainableCircuit::random(&h, &mut rng)?;
    let data = generate_training_set(9, 3, &Line::default(), seed)?.pairs();
    let f = |p: &[f64]| c.mse_at(p, &data).unwrap_or(f64::NAN);
    let g2 = finite_diff_gradient(&f, &c.params, 1e-4);
    let g4 = finite_diff_gradient_4pt(&f, &c.params, 1e-4);
    let num: f64 = g2.iter().zip(&g4).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let den: f64 = g4.iter().map(|b| b * b).sum::<f64>().sqrt();
    let rel = num / den.max(f64::MIN_POSITIVE);
    Ok((rel < 1e-4, format!("relative difference {rel:.2e}")))
}

fn resources(_: u64) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for (n, d) in [(9, 1), (27, 2), (81, 3)] {
        let r = resource_count(n, d)?;
        worst = worst.max((r.breakdown_total() - r.multi_qubit_ops).abs());
    }
    Ok((worst < 1e-9, format!("largest mismatch {worst:.2e}")))
}

fn shor_single_errors(_: u64) -> Result<(bool, String)> {
    let code = CodeUnitaries::shor();
    let mut worst: f64 = 0.0;
    for q in 0..9 {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            let err = gate::pauli(q, p);
            for psi in six_states() {
                let mut rho = encode(&psi, &code)?;
                rho.apply(&err)?;
                worst = worst.max(1.0 - decode(&rho, &code)?.fidelity_pure(&psi));
            }
        }
    }
    Ok((worst < 1e-10, format!("largest infidelity over 27 errors {worst:.2e}")))
}

fn logical_identities(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let q: [f64; 3] = [rng.random_range(0.0..0.2), rng.random_range(0.0..0.2), rng.random_range(0.0..0.2)];
        // Pauli channel on the Bloch ball: axis μ shrinks by 1 − 2(sum of the other two q)
        let s = [1.0 - 2.0 * (q[1] + q[2]), 1.0 - 2.0 * (q[0] + q[2]), 1.0 - 2.0 * (q[0] + q[1])];
        let mut m = BlochAffineMap::identity();
        for k in 0..3 {
            m.m[(k, k)] = s[k];
        }
        worst = worst.max((logical_rate(fidelity_from_map(&m)) - q.iter().sum::<f64>()).abs());
        let em = ErrorModel::new(q[0] / 10.0, q[1] / 10.0, q[2] / 10.0, 0.0)?;
        worst = worst.max((identity_baseline(&em) - (q[0] + q[1] + q[2]) / 10.0).abs());
    }
    Ok((worst < 1e-12, format!("largest deviation {worst:.2e}")))
}
