// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Training sets, the training loop, phase sweeps and model files.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::model::{build_trainable, QcnnHyperparams, Segment, TrainableCircuit};
use super::optim::{minimize_with, BoldDriver, History};
use crate::sim::gellmann::ORDERING_VERSION;
use crate::sim::StateVector;
use crate::spt::{central_sop, cluster_ground_state, ClusterParams};
use crate::{Error, Result};

/// Labels follow `h1/J < 1`; the string order parameter is reported next to
/// each label and must agree with it this far from the transition.
pub const LABEL_CHECK_MARGIN: f64 = 0.3;
/// `⟨S⟩` separating the two phases in the label check.
pub const SOP_SPLIT: f64 = 0.25;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum StateSpec {
    /// Symmetric-sector ground state of the cluster-Ising chain.
    Cluster { params: ClusterParams, seed: u64 },
    Explicit,
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub spec: StateSpec,
    pub state: StateVector,
    pub label: f64,
    /// `⟨S⟩` of the centered string order parameter, when computed.
    pub sop: Option<f64>,
}

#[derive(Clone, Debug, Default)]
pub struct TrainingSet {
    pub samples: Vec<Sample>,
}

impl TrainingSet {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `(state, label)` pairs as consumed by the loss.
    pub fn pairs(&self) -> Vec<(StateVector, f64)> {
        self.samples.iter().map(|s| (s.state.clone(), s.label)).collect()
    }

    /// Samples away from `h1 = 1` whose SOP disagrees with the label.
    pub fn label_conflicts(&self) -> Vec<usize> {
        self.samples
            .iter()
            .enumerate()
            .filter(|(_, s)| match (&s.spec, s.sop) {
                (StateSpec::Cluster { params, .. }, Some(v)) => {
                    (params.h1 / params.j - 1.0).abs() >= LABEL_CHECK_MARGIN && (v > SOP_SPLIT) != (s.label > 0.5)
                }
                _ => false,
            })
            .map(|(i, _)| i)
            .collect()
    }
}

/// A straight line in the (h1, h2) plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Line {
    pub h1: (f64, f64),
    pub h2: (f64, f64),
}

impl Default for Line {
    fn default() -> Self {
        Line { h1: (0.0, 2.0), h2: (0.0, 0.0) }
    }
}

impl Line {
    /// `count` equally spaced points including both ends.
    pub fn points(&self, count: usize) -> Vec<(f64, f64)> {
        let t = |i: usize| if count == 1 { 0.0 } else { i as f64 / (count - 1) as f64 };
        (0..count)
            .map(|i| (self.h1.0 + t(i) * (self.h1.1 - self.h1.0), self.h2.0 + t(i) * (self.h2.1 - self.h2.0)))
            .collect()
    }
}

/// Ground states along `line` labelled `h1/J < 1`, each with its SOP value.
/// Fails if a point far from the transition has an SOP contradicting its label.
pub fn generate_training_set(n: usize, count: usize, line: &Line, seed: u64) -> Result<TrainingSet> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let sop = central_sop(n)?;
    let samples: Vec<Result<Sample>> = line
        .points(count)
        .into_par_iter()
        .map(|(h1, h2)| {
            let params = ClusterParams::new(n, h1, h2);
            let gs = cluster_ground_state(&params, seed)?;
            let v = gs.state.expectation_string(&sop).re;
            Ok(Sample {
                spec: StateSpec::Cluster { params, seed },
                state: gs.state,
                label: if h1 / params.j < 1.0 { 1.0 } else { 0.0 },
                sop: Some(v),
            })
        })
        .collect();
    let set = TrainingSet { samples: samples.into_iter().collect::<Result<Vec<_>>>()? };
    if let Some(&i) = set.label_conflicts().first() {
        let s = &set.samples[i];
        return Err(Error::Criterion(format!(
            "label {} at sample {i} contradicts ⟨S⟩ = {:.3}",
            s.label,
            s.sop.unwrap_or(f64::NAN)
        )));
    }
    Ok(set)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub driver: BoldDriver,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig { driver: BoldDriver::default(), seed: 0 }
    }
}

/// Random start in [0, 2π), then bold-driver descent on the MSE.
pub fn train(h: &QcnnHyperparams, data: &TrainingSet, cfg: &TrainConfig) -> Result<(TrainableCircuit, History)> {
    if data.is_empty() {
        return Err(Error::InvalidArgument("dataset is empty".into()));
    }
    if cfg.driver.max_iter == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let start = TrainableCircuit::random(h, &mut rng)?;
    let pairs = data.pairs();
    let loss = |p: &[f64]| start.mse_at(p, &pairs).unwrap_or(f64::NAN);
    let grad = |p: &[f64]| start.mse_gradient(p, &pairs, cfg.driver.epsilon);
    let (params, hist) = minimize_with(&loss, &grad, start.params.clone(), &cfg.driver)?;
    Ok((build_trainable(h, params)?, hist))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub h1: f64,
    pub h2: f64,
    pub output: Option<f64>,
    pub error: Option<String>,
}

/// QCNN output on the ground state at every grid point. Failures are kept
/// in the row and the sweep continues; rows come back in grid order.
pub fn phase_sweep(circuit: &TrainableCircuit, grid: &[(f64, f64)], seed: u64) -> Vec<SweepRow> {
    let n = circuit.hyperparams.num_qubits;
    grid.par_iter()
        .map(|&(h1, h2)| {
            let r = cluster_ground_state(&ClusterParams::new(n, h1, h2), seed).and_then(|gs| circuit.classify(&gs.state));
            match r {
                Ok(v) => SweepRow { h1, h2, output: Some(v), error: None },
                Err(e) => SweepRow { h1, h2, output: None, error: Some(e.to_string()) },
            }
        })
        .collect()
}

/// Cartesian grid, `h1` outer.
pub fn grid(h1: (f64, f64, usize), h2: (f64, f64, usize)) -> Vec<(f64, f64)> {
    let axis = |(a, b, k): (f64, f64, usize)| Line { h1: (a, b), h2: (0.0, 0.0) }.points(k).into_iter().map(|p| p.0).collect::<Vec<_>>();
    let xs = axis(h1);
    let ys = axis(h2);
    xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentParams {
    #[serde(flatten)]
    pub segment: Segment,
    pub params: Vec<f64>,
}

/// Serialized trained circuit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub hyperparams: QcnnHyperparams,
    pub ordering_version: u32,
    pub segments: Vec<SegmentParams>,
    pub final_mse: f64,
    pub seed: u64,
    pub history: History,
}

impl TrainedModel {
    pub fn new(circuit: &TrainableCircuit, seed: u64, history: History) -> TrainedModel {
        let segments = circuit
            .hyperparams
            .layout()
            .into_iter()
            .map(|s| SegmentParams { params: circuit.params[s.offset..s.offset + s.len].to_vec(), segment: s })
            .collect();
        TrainedModel {
            hyperparams: circuit.hyperparams.clone(),
            ordering_version: ORDERING_VERSION,
            segments,
            final_mse: history.final_loss(),
            seed,
            history,
        }
    }

    pub fn circuit(&self) -> Result<TrainableCircuit> {
        if self.ordering_version != ORDERING_VERSION {
            return Err(Error::Schema(format!("unsupported ordering_version {}", self.ordering_version)));
        }
        let layout = self.hyperparams.layout();
        if layout.len() != self.segments.len() {
            return Err(Error::Schema("segment list does not match the hyperparameters".into()));
        }
        let mut params = Vec::with_capacity(self.hyperparams.num_params());
        for (want, got) in layout.iter().zip(&self.segments) {
            if *want != got.segment || got.params.len() != want.len {
                return Err(Error::Schema(format!("segment {} does not match the layout", got.segment.name)));
            }
            params.extend_from_slice(&got.params);
        }
        build_trainable(&self.hyperparams, params)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<TrainedModel> {
        let m: TrainedModel = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        m.circuit()?;
        Ok(m)
    }
}
