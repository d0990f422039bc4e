// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Trains a small QCNN on labelled cluster-Ising ground states.
//! Budget and size are kept small; `qcnn train-qpr` runs the full setup.
//!
//!     cargo run --release --example train_classifier

use qcnn::train::{generate_training_set, phase_sweep, train, BoldDriver, Line, QcnnHyperparams, TrainConfig, TrainedModel};

fn main() -> qcnn::Result<()> {
    let h = QcnnHyperparams::new(3, 1, 9)?;
    println!("{} parameters", h.num_params());
    for s in h.layout() {
        println!("  {:<8} depth {} offset {:4} len {}", s.name, s.depth, s.offset, s.len);
    }
    let data = generate_training_set(9, 10, &Line::default(), 0)?;
    for s in &data.samples {
        println!("label {} SOP {:+.3}", s.label, s.sop.unwrap_or(f64::NAN));
    }

    let cfg = TrainConfig { driver: BoldDriver { max_iter: 25, ..BoldDriver::default() }, seed: 4 };
    let (circuit, history) = train(&h, &data, &cfg)?;
    println!("MSE {:.4} -> {:.4} in {} steps", history.initial_loss, history.final_loss(), history.steps.len());

    let rows = phase_sweep(&circuit, &[(0.0, 0.0), (0.5, 0.0), (1.5, 0.0), (2.0, 0.0)], 0);
    for r in rows {
        println!("h1 = {:.1}: P(SPT) = {:.3}", r.h1, r.output.unwrap_or(f64::NAN));
    }
    let model = TrainedModel::new(&circuit, cfg.seed, history);
    println!("model file is {} bytes of JSON", serde_json::to_string(&model)?.len());
    Ok(())
}
