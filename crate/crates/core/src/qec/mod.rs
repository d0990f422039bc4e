// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Variational two-layer error-correcting codes on nine qubits.

pub mod baselines;
pub mod channel;
pub mod code;
pub mod curve;
pub mod error_model;
pub mod fast;
pub mod optimize;

pub use baselines::{identity_baseline, logical_rate, shor_baseline};
pub use channel::{cost_c1, effective_first_layer_channel};
pub use code::{apply_noise, decode, encode, CodeUnitaries, EncoderDecoder};
pub use curve::{error_rate_curve, CurvePoint};
pub use error_model::ErrorModel;
pub use optimize::{optimize, QecOptConfig, QecReport};

use crate::Result;

/// Six-state mean recovery fidelity of a variational code.
pub fn fidelity_fq(code: &EncoderDecoder, em: &ErrorModel) -> Result<f64> {
    baselines::code_fidelity(&code.unitaries()?, em)
}
