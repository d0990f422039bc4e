// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! The exact QCNN for the cluster-state SPT phase.

pub mod build;
pub mod circuit;
pub mod run;
pub mod verify;

pub use build::{build_exact_circuit, build_exact_circuit_at, final_width, unit_elements, unit_survivors};
pub use circuit::{CircuitDescription, Element, GateCounts, GateKind, Marker, Readout};
pub use run::{enumerate_branches, run_deferred, run_deferred_capped, run_single_trajectory, run_trajectories, Branch, QcnnOutput, Trajectory};
pub use verify::{verify_construction_criteria, verify_construction_criteria_capped, CriteriaReport, SiteCheck, VerifyRoute};
