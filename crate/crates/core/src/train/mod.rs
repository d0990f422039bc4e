// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Trainable QCNN and its optimizer.

pub mod data;
pub mod model;
pub mod optim;

pub use data::{
    generate_training_set, grid, phase_sweep, train, Line, Sample, SegmentParams, StateSpec, SweepRow, TrainConfig, TrainedModel,
    TrainingSet,
};
pub use model::{build_trainable, QcnnHyperparams, Segment, TrainableCircuit, MAX_FINAL_WIDTH};
pub use optim::{finite_diff_gradient, finite_diff_gradient_4pt, minimize, minimize_with, BoldDriver, History, Step};
