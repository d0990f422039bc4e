// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Experiment plumbing: sample complexity, resource counts, run configs,
//! CSV tables and the verification suite.

pub mod complexity;
pub mod config;
pub mod csvio;
pub mod resources;
pub mod sweep;
pub mod verify;

pub use complexity::{
    centered_sop_bounds, compare_complexity, format_m_min, m_min_from_expectation, probability_from_expectation, sample_complexity,
    ComplexityRow, SampleComplexityQuery, SopColumn, CONFIDENCE_Z, M_MIN_CAP,
};
pub use config::{Axis, Command, Envelope, Metadata, RunConfig, OUT_DIR_ENV};
pub use csvio::{read_table, read_table_file, write_table, write_table_file, ColumnKind, CsvSchema, Table};
pub use resources::{resource_count, LayerCount, ResourceCount};
pub use sweep::exact_sweep;
pub use verify::{run_verify, Check, VerifyReport};

use crate::Error;

/// Process exit status for an error: 1 usage, 2 verification, 3 numerics.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Criterion(_) => 2,
        Error::NotUnitary(_)
        | Error::IncompleteKraus(_)
        | Error::NotTracePreserving(_)
        | Error::ZeroProbability { .. }
        | Error::NoConvergence { .. }
        | Error::Divergence(_) => 3,
        _ => 1,
    }
}
