// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Reference rates: Shor's code and an unprotected qubit.

use super::channel::{fidelity_from_map, logical_map};
use super::code::{fidelity_full, CodeUnitaries};
use super::error_model::ErrorModel;
use crate::Result;

/// Logical error probability from the six-state overlap.
pub fn logical_rate(f_q: f64) -> f64 {
    1.5 * (1.0 - f_q)
}

/// Mean overlap of a code, through the block-factorized route when the noise
/// allows it and the full nine-qubit simulation otherwise.
pub fn code_fidelity(code: &CodeUnitaries, em: &ErrorModel) -> Result<f64> {
    if em.is_block_local() {
        Ok(fidelity_from_map(&logical_map(code, em)?))
    } else {
        fidelity_full(code, em)
    }
}

pub fn shor_baseline(em: &ErrorModel) -> Result<f64> {
    Ok(logical_rate(code_fidelity(&CodeUnitaries::shor(), em)?))
}

/// One bare qubit through one Pauli channel.
pub fn identity_baseline(em: &ErrorModel) -> f64 {
    em.p_x + em.p_y + em.p_z
}
