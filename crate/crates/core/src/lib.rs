// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Quantum convolutional neural networks at desk scale.
//!
//! * [`sim`]: statevector and density-matrix simulation, Pauli algebra,
//!   Gell-Mann unitaries, single-qubit tomography.
//! * [`spt`]: cluster and spin-1 chain Hamiltonians, Lanczos ground states,
//!   string order parameters.
//! * [`exact`]: the fixed QCNN that recognizes the cluster-state SPT phase.
//! * [`heisenberg`]: that circuit pulled back to a multiscale string order
//!   parameter with exact dyadic coefficients.
//! * [`train`]: trainable QCNN, finite-difference descent with a bold driver.
//! * [`qec`]: two-layer encoder/decoder search against Pauli and correlated noise.
//! * [`bench`]: sample complexity, resource counts, configs and CSV output.
//!
//! Qubit 0 is the least significant bit of every amplitude index.

pub mod bench;
pub mod error;
pub mod exact;
pub mod heisenberg;
pub mod qec;
pub mod sim;
pub mod spt;
pub mod train;

pub use error::{Error, Result};
