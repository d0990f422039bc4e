// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense simulation substrate.

pub mod channel;
pub mod density;
pub mod gate;
pub mod gellmann;
pub mod linalg;
pub mod pauli;
pub mod state;
pub mod tomography;

pub use channel::KrausChannel;
pub use density::{apply_channel, partial_trace, DensityMatrix};
pub use gate::{Basis, UnitaryGate};
pub use gellmann::{unitary_from_params, GellMannBasis, ParamVector};
pub use linalg::{CMat, C64};
pub use pauli::{Pauli, PauliKey, PauliString, PauliSum};
pub use state::{measure_qubit, StateVector};
pub use tomography::{process_tomography_1q, BlochAffineMap};
