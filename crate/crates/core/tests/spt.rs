// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::SymmetricEigen;
use proptest::prelude::*;
use qcnn::sim::linalg::{c, max_abs_diff, CMat, C64};
use qcnn::sim::{Pauli, PauliKey, PauliString, StateVector};
use qcnn::spt::models::{embedding_isometry, pi_rotation, spin1_operators};
use qcnn::spt::{
    build_cluster_hamiltonian, build_haldane_hamiltonian, central_sop, cluster_ground_state, cluster_state, ground_state,
    haldane_ground_state, sop, spin1_embed, symmetric_sector_config, x_parity, CacheKey, ClusterParams, GroundStateCache, HaldaneParams,
    LanczosConfig, SparseHamiltonian, DEFAULT_DIM_CAP,
};

fn dense_min(h: &SparseHamiltonian) -> f64 {
    SymmetricEigen::new(h.to_dense()).eigenvalues.min()
}

#[test]
fn lanczos_matches_dense_at_n8() {
    for (h1, h2) in [(0.0, 0.0), (0.5, 0.0), (1.0, 0.3), (1.7, -0.4)] {
        let h = build_cluster_hamiltonian(&ClusterParams::new(8, h1, h2)).unwrap();
        let gs = ground_state(&h, &LanczosConfig::default()).unwrap();
        assert!((gs.energy - dense_min(&h)).abs() < 1e-8, "h1={h1} h2={h2}");
        assert!((h.rayleigh_quotient(gs.state.amplitudes()) - gs.energy).abs() < 1e-8);
    }
}

#[test]
fn symmetric_sector_ground_state_is_symmetric() {
    let p = ClusterParams::new(10, 0.8, 0.2);
    let gs = cluster_ground_state(&p, 3).unwrap();
    for parity in [0, 1] {
        let x = PauliString::new(10, x_parity(10, parity), c(1.0, 0.0));
        assert!((gs.state.expectation_string(&x).re - 1.0).abs() < 1e-8);
    }
}

#[test]
fn symmetric_sector_energy_matches_projected_dense() {
    // dense oracle: H restricted to the +1 eigenspace of both parities
    let n = 8;
    let h = build_cluster_hamiltonian(&ClusterParams::new(n, 0.9, 0.1)).unwrap().to_dense();
    let dim = 1 << n;
    let mut proj = CMat::identity(dim, dim);
    for parity in [0, 1] {
        let p = x_parity(n, parity).to_dense(n);
        proj = &proj * (CMat::identity(dim, dim) + p) * c(0.5, 0.0);
    }
    // shift the complement up so it cannot hold the minimum
    let shifted = &proj * &h * &proj + (CMat::identity(dim, dim) - &proj) * c(1e3, 0.0);
    let want = SymmetricEigen::new(shifted).eigenvalues.min();
    let got = cluster_ground_state(&ClusterParams::new(n, 0.9, 0.1), 0).unwrap().energy;
    assert!((got - want).abs() < 1e-8);
}

#[test]
fn hamiltonian_is_hermitian_and_has_the_cluster_ground_state() {
    let h = build_cluster_hamiltonian(&ClusterParams::new(9, 0.0, 0.0)).unwrap();
    let mut r = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1);
    assert!(h.hermiticity_defect(8, &mut r) < 1e-12);
    let psi = cluster_state(9);
    // −J Σ ZXZ over the 7 interior triples
    assert!((h.rayleigh_quotient(psi.amplitudes()) + 7.0).abs() < 1e-12);
    let gs = cluster_ground_state(&ClusterParams::new(9, 0.0, 0.0), 0).unwrap();
    assert!((gs.energy + 7.0).abs() < 1e-9);
}

#[test]
fn cluster_state_stabilizers() {
    let n = 7;
    let psi = cluster_state(n);
    for i in 0..n {
        let mut k = PauliKey::single(i, Pauli::X);
        if i > 0 {
            k.set(i - 1, Pauli::Z);
        }
        if i + 1 < n {
            k.set(i + 1, Pauli::Z);
        }
        assert!((psi.expectation_string(&PauliString::new(n, k, c(1.0, 0.0))).re - 1.0).abs() < 1e-12);
    }
}

#[test]
fn string_order_parameter_shape_and_limits() {
    assert_eq!(sop(1, 5, 7).unwrap().letters(), "IZXIXZI");
    assert!(sop(1, 4, 7).is_err());
    assert!(sop(1, 7, 7).is_err());
    let s = central_sop(15).unwrap();
    let psi = cluster_state(15);
    assert!((psi.expectation_string(&s).re - 1.0).abs() < 1e-12);
    // deep in the paramagnet the string decays
    let gs = cluster_ground_state(&ClusterParams::new(12, 3.0, 0.0), 0).unwrap();
    assert!(gs.state.expectation_string(&central_sop(12).unwrap()).re.abs() < 0.05);
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(build_cluster_hamiltonian(&ClusterParams::new(2, 0.0, 0.0)).is_err());
    let mut p = ClusterParams::new(6, 0.1, 0.0);
    p.j = 0.0;
    assert!(build_cluster_hamiltonian(&p).is_err());
    assert!(qcnn::spt::models::build_cluster_hamiltonian_capped(&ClusterParams::new(12, 0.0, 0.0), 1 << 10).is_err());
}

#[test]
fn spin1_operators_obey_the_algebra() {
    let [sx, sy, sz] = spin1_operators();
    let comm = &sx * &sy - &sy * &sx;
    assert!(max_abs_diff(&comm, &(&sz * c(0.0, 1.0))) < 1e-14);
    let casimir = &sx * &sx + &sy * &sy + &sz * &sz;
    assert!(max_abs_diff(&casimir, &(CMat::identity(3, 3) * c(2.0, 0.0))) < 1e-14);
    for a in 0..3 {
        let r = pi_rotation(a);
        assert!(max_abs_diff(&(&r * &r), &CMat::identity(3, 3)) < 1e-12);
    }
}

#[test]
fn embedding_is_an_isometry() {
    let t = embedding_isometry();
    assert!(max_abs_diff(&(t.adjoint() * &t), &CMat::identity(3, 3)) < 1e-14);
    let psi: Vec<C64> = (0..27).map(|i| c((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let psi: Vec<C64> = psi.into_iter().map(|z| z / norm).collect();
    let q = spin1_embed(&psi, 3).unwrap();
    assert_eq!(q.num_qubits(), 6);
    assert!((q.norm_sqr() - 1.0).abs() < 1e-12);
    assert!(spin1_embed(&psi[..9], 3).is_err());
}

#[test]
fn haldane_lanczos_matches_dense() {
    let p = HaldaneParams { j: 1.0, omega: 0.4, n: 4 };
    let h = build_haldane_hamiltonian(&p, DEFAULT_DIM_CAP).unwrap();
    let (e, v) = haldane_ground_state(&p, DEFAULT_DIM_CAP, 0).unwrap();
    assert!((e - dense_min(&h)).abs() < 1e-8);
    assert_eq!(v.len(), 81);
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = GroundStateCache::new(dir.path()).unwrap();
    let p = ClusterParams::new(6, 0.4, 0.0);
    let key = CacheKey::cluster(&p, 0, 1e-10);
    assert!(cache.load(&key).unwrap().is_none());
    let gs = cluster_ground_state(&p, 0).unwrap();
    cache.store(&key, gs.energy, &gs.state).unwrap();
    let (e, s) = cache.load(&key).unwrap().unwrap();
    assert_eq!(e, gs.energy);
    assert_eq!(s.amplitudes(), gs.state.amplitudes());
    let other = CacheKey::cluster(&ClusterParams::new(6, 0.5, 0.0), 0, 1e-10);
    assert_ne!(key.digest(), other.digest());
    let calls = std::cell::Cell::new(0);
    let (e2, _) = cache
        .get_or_compute(&key, || {
            calls.set(calls.get() + 1);
            Ok((0.0, StateVector::zero(6)))
        })
        .unwrap();
    assert_eq!((e2, calls.get()), (gs.energy, 0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn ground_state_is_reproducible(h1 in 0.0..2.0f64, h2 in -0.5..0.5f64, seed in 0u64..4) {
        let p = ClusterParams::new(8, h1, h2);
        let a = ground_state(&build_cluster_hamiltonian(&p).unwrap(), &symmetric_sector_config(8, seed)).unwrap();
        let b = cluster_ground_state(&p, seed).unwrap();
        prop_assert_eq!(a.energy, b.energy);
        prop_assert!(a.residual < 1e-6);
    }
}
