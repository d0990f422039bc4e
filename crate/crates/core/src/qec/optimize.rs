// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Layer-by-layer search: first `U₁` against `C₁`, then `U₂` against `f_q`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::baselines::{identity_baseline, logical_rate, shor_baseline};
use super::channel::{block_maps, composite_map, cost_c1, cost_from_map, fidelity_from_map, overlaps_from_map};
use super::fast;
use super::code::{CodeUnitaries, EncoderDecoder};
use super::error_model::ErrorModel;
use crate::sim::linalg::CMat;
use crate::sim::{GellMannBasis, ParamVector};
use crate::train::optim::{minimize, BoldDriver, History, Step};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QecOptConfig {
    pub restarts: usize,
    pub seed: u64,
    pub driver: BoldDriver,
    /// Divide both costs by the total physical error rate so the stopping
    /// tolerance and learning rate see O(1) numbers.
    pub normalize: bool,
    /// Driver steps between re-anchoring the parameterization at the
    /// current unitary.
    #[serde(default = "default_chunk")]
    pub chunk: usize,
}

fn default_chunk() -> usize {
    20
}

impl Default for QecOptConfig {
    fn default() -> Self {
        QecOptConfig {
            restarts: 10,
            seed: 7,
            driver: BoldDriver { max_iter: 2000, tol: 1e-7, ..BoldDriver::default() },
            normalize: true,
            chunk: default_chunk(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QecReport {
    pub f_q: f64,
    pub logical_error_rate: f64,
    /// |+x⟩, |−x⟩, |+y⟩, |−y⟩, |+z⟩, |−z⟩.
    pub overlaps: [f64; 6],
    pub c1: f64,
    pub shor_rate: f64,
    pub identity_rate: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RestartOutcome {
    pub restart: usize,
    pub stage1: History,
    pub stage2: History,
    pub logical_error_rate: f64,
}

pub fn report(code: &EncoderDecoder, em: &ErrorModel) -> Result<QecReport> {
    let u = code.unitaries()?;
    report_unitaries(&u, em)
}

pub fn report_unitaries(u: &CodeUnitaries, em: &ErrorModel) -> Result<QecReport> {
    let (f_q, overlaps) = if em.is_block_local() {
        let m = composite_map(&u.u2, &block_maps(&u.u1, em)?)?;
        (fidelity_from_map(&m), overlaps_from_map(&m))
    } else {
        let o = super::code::overlaps_full(u, em)?;
        (o.iter().sum::<f64>() / 6.0, o)
    };
    Ok(QecReport {
        f_q,
        logical_error_rate: logical_rate(f_q),
        overlaps,
        c1: if em.is_block_local() { cost_c1(&u.u1, em)? } else { f64::NAN },
        shor_rate: shor_baseline(em)?,
        identity_rate: identity_baseline(em),
    })
}

fn random_params<R: Rng>(rng: &mut R) -> Vec<f64> {
    (0..63).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect()
}

/// Bold-driver descent on `U = exp(−i Σ δ_j Λ_j) · U_base`. Every `chunk`
/// steps the increment is folded into the base and δ restarts at zero with
/// a fresh learning rate; far from δ = 0 the exponential map is badly
/// conditioned and plain descent crawls. Stops when a whole chunk improves
/// the loss by less than `driver.tol`, or after `driver.max_iter` steps.
pub fn descend_unitary<F>(basis: &GellMannBasis, cost: &F, u0: CMat, driver: &BoldDriver, chunk: usize) -> Result<(CMat, History)>
where
    F: Fn(&CMat) -> f64 + Sync,
{
    if chunk == 0 {
        return Err(Error::InvalidArgument("chunk must be at least 1".into()));
    }
    let mut base = u0;
    let mut loss = cost(&base);
    let mut hist = History { initial_loss: loss, steps: Vec::new() };
    while hist.steps.len() < driver.max_iter {
        let budget = chunk.min(driver.max_iter - hist.steps.len());
        let f = |d: &[f64]| basis.unitary(d).map(|e| cost(&(e * &base))).unwrap_or(f64::NAN);
        let (d, h) = minimize(&f, vec![0.0; basis.len()], &BoldDriver { max_iter: budget, ..driver.clone() })?;
        let off = hist.steps.len();
        hist.steps.extend(h.steps.iter().map(|s| Step { iteration: s.iteration + off, ..*s }));
        base = basis.unitary(&d)? * &base;
        let improved = loss - h.final_loss();
        loss = h.final_loss();
        if h.steps.is_empty() || improved < driver.tol {
            break;
        }
    }
    Ok((base, hist))
}

/// One restart: stage 1 then stage 2 from fresh uniform draws in [0, 2π).
pub fn optimize_restart(em: &ErrorModel, cfg: &QecOptConfig, restart: usize) -> Result<(EncoderDecoder, RestartOutcome)> {
    if !em.is_block_local() {
        return Err(Error::InvalidArgument("optimization needs block-local noise".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    let basis = GellMannBasis::new(8)?;
    let scale = if cfg.normalize && em.total_rate() > 0.0 { em.total_rate() } else { 1.0 };

    let stage1 = |u: &CMat| fast::block_maps(&fast::to_m8(u), em).iter().map(cost_from_map).sum::<f64>() / 3.0 / scale;
    let (u1, h1) = descend_unitary(&basis, &stage1, basis.unitary(&random_params(&mut rng))?, &cfg.driver, cfg.chunk)?;
    let maps = fast::block_maps(&fast::to_m8(&u1), em);

    let stage2 = |u: &CMat| (1.0 - fidelity_from_map(&fast::composite_map(&fast::to_m8(u), &maps))) / scale;
    let (u2, h2) = descend_unitary(&basis, &stage2, basis.unitary(&random_params(&mut rng))?, &cfg.driver, cfg.chunk)?;
    let rate = logical_rate(1.0 - h2.final_loss() * scale);
    let code = EncoderDecoder::new(
        ParamVector::new(8, basis.params_from_unitary(&u1)?)?,
        ParamVector::new(8, basis.params_from_unitary(&u2)?)?,
    )?;
    Ok((code, RestartOutcome { restart, stage1: h1, stage2: h2, logical_error_rate: rate }))
}

/// Best of `cfg.restarts` independent restarts, run in parallel.
pub fn optimize(em: &ErrorModel, cfg: &QecOptConfig) -> Result<(EncoderDecoder, QecReport, Vec<RestartOutcome>)> {
    if cfg.restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    let runs: Vec<Result<(EncoderDecoder, RestartOutcome)>> =
        (0..cfg.restarts).into_par_iter().map(|r| optimize_restart(em, cfg, r)).collect();
    let mut best: Option<(EncoderDecoder, f64)> = None;
    let mut outcomes = Vec::new();
    let mut failures = Vec::new();
    for r in runs {
        match r {
            Ok((code, out)) => {
                if best.as_ref().is_none_or(|(_, b)| out.logical_error_rate < *b) {
                    best = Some((code, out.logical_error_rate));
                }
                outcomes.push(out);
            }
            Err(e) => failures.push(e.to_string()),
        }
    }
    let (code, _) = best.ok_or_else(|| Error::Divergence(format!("all restarts failed: {}", failures.join("; "))))?;
    let rep = report(&code, em)?;
    Ok((code, rep, outcomes))
}
