// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Block-factorized route. With block-local noise the nine-qubit channel is
//! three copies of a single-qubit effective channel sandwiched by the outer
//! unitary, so everything reduces to three-qubit density matrices.

use super::code::CodeUnitaries;
use super::error_model::ErrorModel;
use crate::sim::linalg::CMat;
use crate::sim::{process_tomography_1q, BlochAffineMap, DensityMatrix};
use crate::{Error, Result};

fn embed_middle(rho: &DensityMatrix) -> DensityMatrix {
    let z = DensityMatrix::zero_state(1);
    z.tensor(rho).tensor(&z)
}

/// `ρ ↦ tr_a[U₁ N(U₁†(|0⟩⟨0| ⊗ ρ ⊗ |0⟩⟨0|)U₁)U₁†]` for one block.
pub fn effective_first_layer_channel<'a>(
    u1: &'a CMat,
    em: &'a ErrorModel,
    block: usize,
) -> impl Fn(&DensityMatrix) -> Result<DensityMatrix> + 'a {
    let pairs = em.block_pairs(block);
    let u1d = u1.adjoint();
    move |rho: &DensityMatrix| {
        let mut r = embed_middle(rho);
        r.apply_matrix(&[0, 1, 2], &u1d)?;
        em.apply(&mut r, &[0, 1, 2], &pairs)?;
        r.apply_matrix(&[0, 1, 2], u1)?;
        r.partial_trace(&[1])
    }
}

pub fn block_map(u1: &CMat, em: &ErrorModel, block: usize) -> Result<BlochAffineMap> {
    if block > 2 {
        return Err(Error::InvalidArgument(format!("block {block} out of range")));
    }
    process_tomography_1q(effective_first_layer_channel(u1, em, block))
}

pub fn block_maps(u1: &CMat, em: &ErrorModel) -> Result<[BlochAffineMap; 3]> {
    let m0 = block_map(u1, em, 0)?;
    let same = |b: usize| em.block_pairs(b) == em.block_pairs(0);
    let m1 = if same(1) { m0 } else { block_map(u1, em, 1)? };
    let m2 = if same(2) { m0 } else { block_map(u1, em, 2)? };
    Ok([m0, m1, m2])
}

/// Logical channel of the whole code given the three block channels.
pub fn composite_map(u2: &CMat, maps: &[BlochAffineMap; 3]) -> Result<BlochAffineMap> {
    let u2d = u2.adjoint();
    process_tomography_1q(|rho: &DensityMatrix| {
        let mut r = embed_middle(rho);
        r.apply_matrix(&[0, 1, 2], &u2d)?;
        for (q, m) in maps.iter().enumerate() {
            r.apply_local_map(q, |e| m.apply_operator(e))?;
        }
        r.apply_matrix(&[0, 1, 2], u2)?;
        r.partial_trace(&[1])
    })
}

pub fn logical_map(code: &CodeUnitaries, em: &ErrorModel) -> Result<BlochAffineMap> {
    if !em.is_block_local() {
        return Err(Error::InvalidArgument("noise pairs cross blocks; use the full route".into()));
    }
    composite_map(&code.u2, &block_maps(&code.u1, em)?)
}

/// Overlaps of |+x⟩, |−x⟩, |+y⟩, |−y⟩, |+z⟩, |−z⟩ from a logical map.
pub fn overlaps_from_map(m: &BlochAffineMap) -> [f64; 6] {
    let mut out = [0.0; 6];
    for mu in 0..3 {
        out[2 * mu] = (1.0 + m.m[(mu, mu)] + m.c[mu]) / 2.0;
        out[2 * mu + 1] = (1.0 + m.m[(mu, mu)] - m.c[mu]) / 2.0;
    }
    out
}

/// Six-state mean overlap, `1/2 + tr(M)/6`.
pub fn fidelity_from_map(m: &BlochAffineMap) -> f64 {
    0.5 + m.m.trace() / 6.0
}

/// Error probabilities `q_μ = (1 + s_μ − s_ν − s_λ)/4` from sorted singular
/// values, clamped at zero and returned in descending order.
pub fn probabilities_from_singular_values(s: [f64; 3]) -> [f64; 3] {
    let mut q = [0.0; 3];
    for mu in 0..3 {
        let others: f64 = (0..3).filter(|&k| k != mu).map(|k| s[k]).sum();
        q[mu] = ((1.0 + s[mu] - others) / 4.0).max(0.0);
    }
    q.sort_by(|a, b| b.partial_cmp(a).unwrap());
    q
}

/// `C₁ = q₁² + q₂ + q₃` for one effective channel.
pub fn cost_from_map(m: &BlochAffineMap) -> f64 {
    let q = probabilities_from_singular_values(m.singular_values());
    q[0] * q[0] + q[1] + q[2]
}

/// `C₁` averaged over the three blocks.
pub fn cost_c1(u1: &CMat, em: &ErrorModel) -> Result<f64> {
    let maps = block_maps(u1, em)?;
    Ok(maps.iter().map(cost_from_map).sum::<f64>() / 3.0)
}
