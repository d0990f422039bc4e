// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Spin-chain models with symmetry-protected topological order.

pub mod cache;
pub mod hamiltonian;
pub mod lanczos;
pub mod models;

pub use cache::{CacheKey, GroundStateCache};
pub use hamiltonian::{LocalTerm, SparseHamiltonian, DEFAULT_DIM_CAP};
pub use lanczos::{ground_state, ground_vector, GroundState, LanczosConfig};
pub use models::{
    build_cluster_hamiltonian, build_haldane_hamiltonian, central_sop, cluster_ground_state, cluster_state, haldane_ground_state, sop,
    spin1_embed, symmetric_sector_config,
    x_parity, ClusterParams, HaldaneParams,
};
