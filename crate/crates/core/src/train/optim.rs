// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Central finite differences and bold-driver gradient descent.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BoldDriver {
    pub eta0: f64,
    pub grow: f64,
    pub shrink: f64,
    pub epsilon: f64,
    /// Stop once an accepted step changes the loss by less than this.
    pub tol: f64,
    pub max_iter: usize,
    /// Stop once the learning rate collapses below this.
    pub min_eta: f64,
}

impl Default for BoldDriver {
    fn default() -> Self {
        BoldDriver { eta0: 10.0, grow: 1.05, shrink: 0.5, epsilon: 1e-4, tol: 1e-5, max_iter: 1000, min_eta: 1e-12 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub iteration: usize,
    /// Loss at the current (accepted) parameters after this step.
    pub loss: f64,
    /// Learning rate used to propose this step.
    pub eta: f64,
    pub accepted: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct History {
    pub initial_loss: f64,
    pub steps: Vec<Step>,
}

impl History {
    pub fn final_loss(&self) -> f64 {
        self.steps.last().map(|s| s.loss).unwrap_or(self.initial_loss)
    }

    /// Replays the learning-rate sequence implied by the accept/reject record.
    pub fn replay_eta(&self, cfg: &BoldDriver) -> Vec<f64> {
        let mut eta = cfg.eta0;
        let mut out = Vec::with_capacity(self.steps.len());
        for s in &self.steps {
            out.push(eta);
            eta *= if s.accepted { cfg.grow } else { cfg.shrink };
        }
        out
    }
}

/// `∂f/∂x_μ ≈ (f(x + εe_μ) − f(x − εe_μ)) / 2ε`, coordinates in parallel.
pub fn finite_diff_gradient<F>(f: &F, x: &[f64], eps: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    (0..x.len())
        .into_par_iter()
        .map(|mu| {
            let mut xp = x.to_vec();
            xp[mu] += eps;
            let fp = f(&xp);
            xp[mu] = x[mu] - eps;
            let fm = f(&xp);
            (fp - fm) / (2.0 * eps)
        })
        .collect()
}

/// Fourth-order stencil, used as an oracle for the two-point rule.
pub fn finite_diff_gradient_4pt<F>(f: &F, x: &[f64], eps: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    (0..x.len())
        .into_par_iter()
        .map(|mu| {
            let at = |d: f64| {
                let mut xp = x.to_vec();
                xp[mu] += d;
                f(&xp)
            };
            (-at(2.0 * eps) + 8.0 * at(eps) - 8.0 * at(-eps) + at(-2.0 * eps)) / (12.0 * eps)
        })
        .collect()
}

/// Minimizes `f` from `x0`. A step `x − ηg` is accepted when the loss drops,
/// after which η grows by `grow`; otherwise it is discarded and η shrinks.
pub fn minimize<F>(f: &F, x0: Vec<f64>, cfg: &BoldDriver) -> Result<(Vec<f64>, History)>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    minimize_with(f, &|x: &[f64]| Ok(finite_diff_gradient(f, x, cfg.epsilon)), x0, cfg)
}

/// [`minimize`] with a caller-supplied gradient.
pub fn minimize_with<F, G>(f: &F, grad_fn: &G, x0: Vec<f64>, cfg: &BoldDriver) -> Result<(Vec<f64>, History)>
where
    F: Fn(&[f64]) -> f64 + Sync,
    G: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let mut x = x0;
    let mut loss = f(&x);
    if !loss.is_finite() {
        return Err(Error::Divergence(format!("initial loss is {loss}")));
    }
    let mut hist = History { initial_loss: loss, steps: Vec::new() };
    let mut eta = cfg.eta0;
    let mut grad = grad_fn(&x)?;
    for it in 0..cfg.max_iter {
        let trial: Vec<f64> = x.iter().zip(grad.iter()).map(|(a, g)| a - eta * g).collect();
        let l = f(&trial);
        if l.is_nan() {
            return Err(Error::Divergence(format!("loss became NaN at iteration {it}")));
        }
        let accepted = l < loss;
        let delta = loss - l;
        if accepted {
            x = trial;
            loss = l;
        }
        hist.steps.push(Step { iteration: it, loss, eta, accepted });
        eta *= if accepted { cfg.grow } else { cfg.shrink };
        if accepted && delta.abs() < cfg.tol {
            break;
        }
        if eta < cfg.min_eta {
            break;
        }
        if accepted {
            grad = grad_fn(&x)?;
        }
    }
    Ok((x, hist))
}
