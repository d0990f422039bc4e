// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;
use qcnn::sim::linalg::{c, hermiticity_error, kron, max_abs_diff, pauli_x, pauli_y, pauli_z, unitarity_error, CMat, C64};
use qcnn::sim::{
    gate, process_tomography_1q, unitary_from_params, Basis, DensityMatrix, GellMannBasis, KrausChannel, ParamVector, Pauli, PauliKey,
    PauliString, PauliSum, StateVector, UnitaryGate,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `out[i] = Σ_j M[sub(i), sub(j)] ψ[j]` over `j` agreeing with `i` off the targets.
fn naive_apply(psi: &[C64], n: usize, targets: &[usize], m: &CMat) -> Vec<C64> {
    let sub = |i: usize| targets.iter().enumerate().fold(0, |a, (k, &t)| a | (((i >> t) & 1) << k));
    let mask: usize = targets.iter().map(|t| 1 << t).sum();
    (0..1usize << n)
        .map(|i| {
            (0..1usize << n)
                .filter(|j| j & !mask == i & !mask)
                .map(|j| m[(sub(i), sub(j))] * psi[j])
                .sum()
        })
        .collect()
}

fn random_unitary(k: usize, seed: u64) -> CMat {
    use rand::Rng;
    let b = GellMannBasis::for_qubits(k).unwrap();
    let mut r = rng(seed);
    let p: Vec<f64> = (0..b.len()).map(|_| r.random_range(0.0..std::f64::consts::TAU)).collect();
    b.unitary(&p).unwrap()
}

fn dense_single(p: Pauli) -> CMat {
    match p {
        Pauli::I => CMat::identity(2, 2),
        Pauli::X => pauli_x(),
        Pauli::Y => pauli_y(),
        Pauli::Z => pauli_z(),
    }
}

/// Dense matrix of a Pauli key built qubit by qubit, qubit 0 least significant.
fn dense_key(k: &PauliKey, n: usize) -> CMat {
    (0..n).fold(CMat::identity(1, 1), |acc, q| kron(&dense_single(k.get(q)), &acc))
}

fn key_strategy(n: usize) -> impl Strategy<Value = PauliKey> {
    (0u128..1 << n, 0u128..1 << n).prop_map(|(x, z)| PauliKey { x, z })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_matches_naive_product(seed in 0u64..1000, a in 0usize..5, b in 0usize..5) {
        prop_assume!(a != b);
        let n = 5;
        let psi = StateVector::random(n, &mut rng(seed));
        let m = random_unitary(2, seed + 1);
        let mut got = psi.clone();
        got.apply(&UnitaryGate::new(vec![a, b], m.clone()).unwrap()).unwrap();
        let want = naive_apply(psi.amplitudes(), n, &[a, b], &m);
        let d = got.amplitudes().iter().zip(&want).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(d < 1e-12);
    }

    #[test]
    fn norm_is_preserved(seed in 0u64..1000) {
        let mut psi = StateVector::random(6, &mut rng(seed));
        psi.apply(&UnitaryGate::new(vec![4, 1, 2], random_unitary(3, seed)).unwrap()).unwrap();
        prop_assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_product_matches_dense(a in key_strategy(3), b in key_strategy(3)) {
        let (k, key) = a.mul_phase(&b);
        let phase = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][k as usize];
        let want = dense_key(&a, 3) * dense_key(&b, 3);
        let got = dense_key(&key, 3) * phase;
        prop_assert!(max_abs_diff(&want, &got) < 1e-12);
        prop_assert_eq!(a.commutes_with(&b), max_abs_diff(&(dense_key(&a, 3) * dense_key(&b, 3)), &(dense_key(&b, 3) * dense_key(&a, 3))) < 1e-12);
    }

    #[test]
    fn pauli_product_is_associative(a in key_strategy(4), b in key_strategy(4), d in key_strategy(4)) {
        let (p1, ab) = a.mul_phase(&b);
        let (p2, l) = ab.mul_phase(&d);
        let (q1, bd) = b.mul_phase(&d);
        let (q2, r) = a.mul_phase(&bd);
        prop_assert_eq!(l, r);
        prop_assert_eq!((p1 + p2) % 4, (q1 + q2) % 4);
    }

    #[test]
    fn key_to_dense_agrees_with_oracle(k in key_strategy(3)) {
        prop_assert!(max_abs_diff(&k.to_dense(3), &dense_key(&k, 3)) < 1e-15);
    }

    #[test]
    fn basis_phase_matches_dense(k in key_strategy(3), i in 0usize..8) {
        let m = dense_key(&k, 3);
        let j = i ^ (k.x as usize);
        prop_assert!((m[(j, i)] - k.basis_phase(i)).norm() < 1e-15);
    }

    #[test]
    fn pauli_expectation_matches_dense(seed in 0u64..500, k in key_strategy(4)) {
        let psi = StateVector::random(4, &mut rng(seed));
        let v = CMat::from_column_slice(16, 1, psi.amplitudes());
        let want = (v.adjoint() * dense_key(&k, 4) * &v)[(0, 0)];
        let got = psi.expectation_string(&PauliString::new(4, k, c(1.0, 0.0)));
        prop_assert!((want - got).norm() < 1e-12);
    }

    #[test]
    fn reduced_density_is_a_state(seed in 0u64..500) {
        let psi = StateVector::random(6, &mut rng(seed));
        let rho = psi.reduced_density(&[4, 0, 2]).unwrap();
        prop_assert!((rho.trace() - c(1.0, 0.0)).norm() < 1e-12);
        prop_assert!(hermiticity_error(&rho) < 1e-12);
        let dm = DensityMatrix::new(rho).unwrap();
        prop_assert!(dm.min_eigenvalue() > -1e-12);
    }

    #[test]
    fn reduced_density_reproduces_local_expectations(seed in 0u64..500, k in key_strategy(2)) {
        let psi = StateVector::random(5, &mut rng(seed));
        let keep = [3, 1];
        let rho = psi.reduced_density(&keep).unwrap();
        let mut full = PauliKey::IDENTITY;
        full.set(3, k.get(0));
        full.set(1, k.get(1));
        let want = psi.expectation_string(&PauliString::new(5, full, c(1.0, 0.0))).re;
        let got = (&rho * dense_key(&k, 2)).trace().re;
        prop_assert!((want - got).abs() < 1e-12);
    }

    #[test]
    fn gell_mann_round_trip(seed in 0u64..500) {
        use rand::Rng;
        let b = GellMannBasis::new(4).unwrap();
        let mut r = rng(seed);
        let p: Vec<f64> = (0..b.len()).map(|_| r.random_range(-0.2..0.2)).collect();
        let back = b.params_from_unitary(&b.unitary(&p).unwrap()).unwrap();
        for (x, y) in p.iter().zip(&back) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn pauli_channel_is_trace_preserving(px in 0.0..0.3f64, py in 0.0..0.3f64, pz in 0.0..0.3f64, seed in 0u64..100) {
        let ch = KrausChannel::pauli(1, px, py, pz).unwrap();
        prop_assert!(ch.completeness_error() < 1e-12);
        let mut rho = DensityMatrix::from_pure(&StateVector::random(2, &mut rng(seed)));
        rho.apply_channel(&ch).unwrap();
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(rho.min_eigenvalue() > -1e-12);
    }
}

#[test]
fn gell_mann_counts_and_orthogonality() {
    for dim in [2, 3, 4, 8] {
        let b = GellMannBasis::new(dim).unwrap();
        assert_eq!(b.len(), dim * dim - 1);
        let g = b.generators();
        for (i, a) in g.iter().enumerate() {
            assert!(hermiticity_error(a) < 1e-15);
            assert!(a.trace().norm() < 1e-15);
            for (j, bj) in g.iter().enumerate() {
                let ip = (a * bj).trace();
                let want = if i == j { 2.0 } else { 0.0 };
                assert!((ip - c(want, 0.0)).norm() < 1e-12, "dim {dim} ({i}, {j})");
            }
        }
    }
    assert!(GellMannBasis::new(1).is_err());
}

#[test]
fn pauli_generators_for_one_qubit() {
    let g = GellMannBasis::new(2).unwrap().generators();
    assert!(max_abs_diff(&g[0], &pauli_x()) < 1e-15);
    assert!(max_abs_diff(&g[1], &pauli_y()) < 1e-15);
    assert!(max_abs_diff(&g[2], &pauli_z()) < 1e-15);
}

#[test]
fn unitary_from_params_checks_length() {
    let b = GellMannBasis::for_qubits(2).unwrap();
    let p = ParamVector::new(4, vec![0.3; 15]).unwrap();
    let u = unitary_from_params(&b, &p).unwrap();
    assert!(unitarity_error(&u.matrix) < 1e-12);
    assert!(ParamVector::new(4, vec![0.0; 14]).is_err());
    let zero = unitary_from_params(&b, &ParamVector::zeros(4)).unwrap();
    assert!(max_abs_diff(&zero.matrix, &CMat::identity(4, 4)) < 1e-15);
}

#[test]
fn single_parameter_rotation_has_closed_form() {
    // exp(−iθX) = cos θ − i sin θ X
    let b = GellMannBasis::new(2).unwrap();
    let t = 0.37;
    let u = b.unitary(&[t, 0.0, 0.0]).unwrap();
    let want = CMat::identity(2, 2) * c(t.cos(), 0.0) - pauli_x() * c(0.0, t.sin());
    assert!(max_abs_diff(&u, &want) < 1e-14);
}

#[test]
fn gate_errors() {
    assert!(UnitaryGate::new(vec![0, 0], CMat::identity(4, 4)).is_err());
    assert!(UnitaryGate::new(vec![0], CMat::identity(4, 4)).is_err());
    assert!(UnitaryGate::new(vec![0], pauli_x() * c(2.0, 0.0)).is_err());
    let mut psi = StateVector::zero(2);
    assert!(psi.apply(&gate::x(2)).is_err());
}

#[test]
fn bell_state_correlations() {
    let mut psi = StateVector::zero(2);
    psi.apply(&gate::h(0)).unwrap();
    psi.apply(&gate::cnot(0, 1)).unwrap();
    for (s, v) in [("XX", 1.0), ("ZZ", 1.0), ("YY", -1.0), ("ZI", 0.0)] {
        assert!((psi.expectation_string(&PauliString::parse(s).unwrap()).re - v).abs() < 1e-12, "{s}");
    }
}

#[test]
fn measurement_probabilities_and_collapse() {
    let mut psi = StateVector::plus(2);
    assert!((psi.probability(0, Basis::X, 1).unwrap() - 1.0).abs() < 1e-12);
    assert!((psi.probability(1, Basis::Z, -1).unwrap() - 0.5).abs() < 1e-12);
    let p = psi.project(1, Basis::Z, -1).unwrap();
    assert!((p - 0.5).abs() < 1e-12);
    assert!((psi.probability(1, Basis::Z, -1).unwrap() - 1.0).abs() < 1e-12);
    let mut zero = StateVector::zero(1);
    assert!(zero.project(0, Basis::Z, -1).is_err());
}

#[test]
fn controlled_gate_fires_only_on_condition() {
    // Z-controlled X with control on −1 is a CNOT
    let g = gate::controlled(&[(0, Basis::Z, -1)], 1, Pauli::X);
    for i in 0..4 {
        let mut a = StateVector::basis(2, i);
        a.apply(&g).unwrap();
        let mut b = StateVector::basis(2, i);
        b.apply(&gate::cnot(0, 1)).unwrap();
        assert!((a.fidelity(&b) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn pauli_sum_algebra() {
    let x = PauliSum::from_string(&PauliString::parse("X").unwrap());
    let z = PauliSum::from_string(&PauliString::parse("Z").unwrap());
    let xz = x.mul(&z);
    // XZ = −iY
    let y = PauliKey::single(0, Pauli::Y);
    assert!((xz.coeff(&y) - c(0.0, -1.0)).norm() < 1e-15);
    assert!(!xz.is_hermitian(1e-12));
    let s = x.add(&z);
    assert!((s.two_norm_sqr() - 2.0).abs() < 1e-15);
    assert!(s.mul(&s).is_hermitian(1e-12));
}

#[test]
fn tomography_recovers_known_channels() {
    let (px, py, pz) = (0.05, 0.1, 0.02);
    let m = process_tomography_1q(|r: &DensityMatrix| {
        let mut o = r.clone();
        o.apply_channel(&KrausChannel::pauli(0, px, py, pz)?)?;
        Ok(o)
    })
    .unwrap();
    let want = [1.0 - 2.0 * (py + pz), 1.0 - 2.0 * (px + pz), 1.0 - 2.0 * (px + py)];
    for k in 0..3 {
        assert!((m.m[(k, k)] - want[k]).abs() < 1e-12);
        assert!(m.c[k].abs() < 1e-12);
    }
    // amplitude damping has a translation towards |0⟩
    let g: f64 = 0.3;
    let k0 = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c((1.0 - g).sqrt(), 0.0)]);
    let k1 = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(g.sqrt(), 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let ad = KrausChannel::new(vec![0], vec![k0, k1]).unwrap();
    let m = process_tomography_1q(|r: &DensityMatrix| {
        let mut o = r.clone();
        o.apply_channel(&ad)?;
        Ok(o)
    })
    .unwrap();
    assert!((m.c[2] - g).abs() < 1e-12);
    assert!((m.m[(2, 2)] - (1.0 - g)).abs() < 1e-12);
    assert!((m.m[(0, 0)] - (1.0 - g).sqrt()).abs() < 1e-12);
}

#[test]
fn incomplete_kraus_set_is_rejected() {
    let k = CMat::identity(2, 2) * c(0.5, 0.0);
    assert!(KrausChannel::new(vec![0], vec![k]).is_err());
}
