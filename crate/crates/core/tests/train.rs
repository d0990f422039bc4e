// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::FRAC_PI_2;

use qcnn::exact::run_deferred;
use qcnn::qec::code::circuit_matrix;
use qcnn::sim::{gate, GellMannBasis, StateVector};
use qcnn::train::{
    build_trainable, finite_diff_gradient, finite_diff_gradient_4pt, generate_training_set, grid, minimize, phase_sweep, train,
    BoldDriver, Line, QcnnHyperparams, TrainConfig, TrainableCircuit, TrainedModel,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Hand count: per unit, one two-qubit unitary for each pair of an
/// `(n+1)`-window, `n` block unitaries, `n−1` single-qubit V's; then `F`.
fn expected_params(n: usize, d: usize, num_qubits: usize) -> usize {
    let su = |q: u32| 4usize.pow(q) - 1;
    let pairs = (n + 1) * n / 2;
    let unit = pairs * su(2) + n * su(n as u32) + (n - 1) * su(1);
    let m = num_qubits / n.pow(d as u32);
    d * unit + su(m as u32)
}

fn zero_circuit(h: &QcnnHyperparams) -> TrainableCircuit {
    build_trainable(h, vec![0.0; h.num_params()]).unwrap()
}

fn f_offset(h: &QcnnHyperparams) -> usize {
    h.layout().last().unwrap().offset
}

fn small_data(seed: u64) -> Vec<(StateVector, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![(StateVector::random(9, &mut rng), 1.0), (StateVector::random(9, &mut rng), 0.0)]
}

#[test]
fn parameter_counts() {
    for (n, d, q, want) in [(3, 1, 9, 348), (3, 1, 15, 1308), (3, 2, 9, 573)] {
        let h = QcnnHyperparams::new(n, d, q).unwrap();
        assert_eq!(h.num_params(), want);
        assert_eq!(expected_params(n, d, q), want);
    }
    for (n, d, q) in [(2, 1, 8), (3, 2, 27), (4, 1, 16)] {
        assert_eq!(QcnnHyperparams::new(n, d, q).unwrap().num_params(), expected_params(n, d, q));
    }
    assert!(QcnnHyperparams::new(3, 1, 10).is_err());
    assert!(QcnnHyperparams::new(3, 1, 27).is_err(), "final width 9 is too wide");
    assert!(QcnnHyperparams::new(1, 1, 9).is_err());
}

#[test]
fn layout_is_contiguous() {
    let h = QcnnHyperparams::new(3, 2, 9).unwrap();
    let mut next = 0;
    for s in h.layout() {
        assert_eq!(s.offset, next);
        assert_eq!(s.len, 4usize.pow(s.qubits as u32) - 1);
        next += s.len;
    }
    assert_eq!(next, h.num_params());
    assert!(build_trainable(&h, vec![0.0; 3]).is_err());
}

#[test]
fn hadamard_readout_gives_a_constant_half() {
    let h = QcnnHyperparams::new(3, 1, 9).unwrap();
    let mut c = zero_circuit(&h);
    let f = circuit_matrix(3, &[gate::h(c.readout_position())]);
    let fp = GellMannBasis::for_qubits(3).unwrap().params_from_unitary(&f).unwrap();
    let off = f_offset(&h);
    c.params[off..off + fp.len()].copy_from_slice(&fp);
    let zero = StateVector::zero(9);
    assert!((c.classify(&zero).unwrap() - 0.5).abs() < 1e-10);
    let data = vec![(zero.clone(), 1.0), (zero.clone(), 0.0), (zero, 1.0)];
    assert!((c.mse(&data).unwrap() - 0.125).abs() < 1e-10);
}

#[test]
fn pooling_corrections_are_idle_on_the_zero_state() {
    // identity units leave every measured qubit at +1, so no V ever fires
    let h = QcnnHyperparams::new(3, 1, 9).unwrap();
    let c = zero_circuit(&h);
    let data = vec![(StateVector::zero(9), 0.0)];
    let g = c.mse_gradient(&c.params, &data, 1e-4).unwrap();
    for s in h.layout().iter().filter(|s| s.name.starts_with('V')) {
        assert!(g[s.offset..s.offset + s.len].iter().all(|&v| v == 0.0), "{}", s.name);
    }
}

#[test]
fn single_rotation_of_the_final_layer() {
    // generator index 2^pos − 1 couples |0…0⟩ with the readout bit set, so
    // exp(−iθΛ)|0⟩ has P(Z=+1) = cos²θ and MSE against label 0 is cos⁴θ/2
    let h = QcnnHyperparams::new(3, 1, 9).unwrap();
    let c = zero_circuit(&h);
    let idx = f_offset(&h) + (1 << c.readout_position()) - 1;
    let data = vec![(StateVector::zero(9), 0.0)];
    let at = |theta: f64| {
        let mut p = c.params.clone();
        p[idx] = theta;
        c.mse_at(&p, &data).unwrap()
    };
    for theta in [0.0, 0.3, 0.9, 1.4, 2.5] {
        assert!((at(theta) - theta.cos().powi(4) / 2.0).abs() < 1e-12, "θ={theta}");
    }
    let cfg = BoldDriver { eta0: 1.0, max_iter: 500, tol: 1e-14, ..BoldDriver::default() };
    let (x, hist) = minimize(&|x: &[f64]| at(x[0]), vec![0.3], &cfg).unwrap();
    assert!((x[0] - FRAC_PI_2).abs() < 2e-2, "{}", x[0]);
    assert!(hist.final_loss() < 1e-7);
}

#[test]
fn fast_gradient_matches_generic_finite_differences() {
    let h = QcnnHyperparams::new(3, 1, 9).unwrap();
    let c = TrainableCircuit::random(&h, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
    let data = small_data(1);
    let fast = c.mse_gradient(&c.params, &data, 1e-4).unwrap();
    let generic = finite_diff_gradient(&|p: &[f64]| c.mse_at(p, &data).unwrap(), &c.params, 1e-4);
    let diff = fast.iter().zip(&generic).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(diff < 1e-12, "{diff}");
}

#[test]
fn two_point_and_four_point_stencils_agree() {
    let f = |x: &[f64]| x[0].sin() * x[1] * x[1] + (x[2] * x[0]).exp();
    let x = [0.4, -1.3, 0.7];
    let exact = [0.4f64.cos() * 1.69 + 0.7 * (0.28f64).exp(), 0.4f64.sin() * 2.0 * -1.3, 0.4 * (0.28f64).exp()];
    let g2 = finite_diff_gradient(&f, &x, 1e-4);
    let g4 = finite_diff_gradient_4pt(&f, &x, 1e-3);
    for i in 0..3 {
        assert!((g2[i] - exact[i]).abs() < 1e-7);
        assert!((g4[i] - exact[i]).abs() < 1e-9);
    }

    let h = QcnnHyperparams::new(3, 2, 9).unwrap();
    let c = TrainableCircuit::random(&h, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
    let data = small_data(2);
    let loss = |p: &[f64]| c.mse_at(p, &data).unwrap();
    let a = finite_diff_gradient(&loss, &c.params, 1e-4);
    let b = finite_diff_gradient_4pt(&loss, &c.params, 1e-3);
    let diff = a.iter().zip(&b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    assert!(diff < 1e-6, "{diff}");
}

#[test]
fn training_descends_and_replays() {
    let set = generate_training_set(9, 4, &Line::default(), 0).unwrap();
    let h = QcnnHyperparams::new(3, 1, 9).unwrap();
    let cfg = TrainConfig { driver: BoldDriver { max_iter: 15, ..BoldDriver::default() }, seed: 5 };
    let (c, hist) = train(&h, &set, &cfg).unwrap();
    assert!(hist.final_loss() <= hist.initial_loss);
    assert!((c.mse(&set.pairs()).unwrap() - hist.final_loss()).abs() < 1e-12);

    let eta: Vec<f64> = hist.steps.iter().map(|s| s.eta).collect();
    assert_eq!(eta, hist.replay_eta(&cfg.driver));
    let mut prev = hist.initial_loss;
    for s in &hist.steps {
        if s.accepted {
            assert!(s.loss < prev);
        } else {
            assert_eq!(s.loss, prev);
        }
        prev = s.loss;
    }

    let (c2, hist2) = train(&h, &set, &cfg).unwrap();
    assert_eq!(c.params, c2.params);
    assert_eq!(hist, hist2);
}

#[test]
fn classifier_matches_its_explicit_program() {
    let h = QcnnHyperparams::new(3, 1, 9).unwrap();
    let c = TrainableCircuit::random(&h, &mut ChaCha8Rng::seed_from_u64(12)).unwrap();
    let prog = c.to_description().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..5 {
        let psi = StateVector::random(9, &mut rng);
        let z = run_deferred(&psi, &prog).unwrap().expectation;
        assert!((c.classify(&psi).unwrap() - (1.0 + z) / 2.0).abs() < 1e-10);
    }
}

#[test]
fn model_file_round_trip() {
    let h = QcnnHyperparams::new(3, 1, 9).unwrap();
    let c = TrainableCircuit::random(&h, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    let m = TrainedModel::new(&c, 1, Default::default());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    m.save(&path).unwrap();
    let back = TrainedModel::load(&path).unwrap();
    assert_eq!(back, m);
    assert_eq!(back.circuit().unwrap().params, c.params);

    let mut bad = m.clone();
    bad.ordering_version += 1;
    assert!(bad.circuit().is_err());
    let mut bad = m.clone();
    bad.segments[0].params.pop();
    assert!(bad.circuit().is_err());
    let mut bad = m;
    bad.segments.swap(0, 1);
    assert!(bad.circuit().is_err());
}

#[test]
fn labels_and_sweeps() {
    let set = generate_training_set(9, 5, &Line::default(), 0).unwrap();
    let labels: Vec<f64> = set.samples.iter().map(|s| s.label).collect();
    assert_eq!(labels, [1.0, 1.0, 0.0, 0.0, 0.0]);
    assert!(set.samples[0].sop.unwrap() > 0.99);
    assert!(set.label_conflicts().is_empty());
    assert!(generate_training_set(9, 0, &Line::default(), 0).is_err());

    let g = grid((0.0, 2.0, 3), (-0.2, 0.2, 2));
    assert_eq!(g.len(), 6);
    assert_eq!(g[1], (0.0, 0.2));
    let h = QcnnHyperparams::new(3, 1, 9).unwrap();
    let c = TrainableCircuit::random(&h, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
    let rows = phase_sweep(&c, &g, 0);
    assert_eq!(rows.len(), 6);
    for (r, p) in rows.iter().zip(&g) {
        assert_eq!((r.h1, r.h2), *p);
        let v = r.output.unwrap();
        assert!((0.0..=1.0).contains(&v));
    }
}

#[test]
fn gradient_does_not_depend_on_thread_count() {
    let h = QcnnHyperparams::new(3, 1, 9).unwrap();
    let c = TrainableCircuit::random(&h, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
    let data = small_data(3);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| c.mse_gradient(&c.params, &data, 1e-4).unwrap())
    };
    assert_eq!(run(1), run(3));
}
