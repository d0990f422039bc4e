// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration files and the metadata block attached to every output.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::qec::ErrorModel;
use crate::sim::gellmann::ORDERING_VERSION;
use crate::train::{BoldDriver, Line};
use crate::{Error, Result};

/// Environment variable that overrides the output directory.
pub const OUT_DIR_ENV: &str = "QCNN_OUT";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    PhaseSweep,
    TrainQpr,
    TrainQec,
    QecCurve,
    SopExpand,
    SampleComplexity,
    ResourceCount,
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::PhaseSweep => "phase-sweep",
            Command::TrainQpr => "train-qpr",
            Command::TrainQec => "train-qec",
            Command::QecCurve => "qec-curve",
            Command::SopExpand => "sop-expand",
            Command::SampleComplexity => "sample-complexity",
            Command::ResourceCount => "resource-count",
            Command::Verify => "verify",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CircuitSection {
    pub qubits: usize,
    pub depth: usize,
    /// Block size of the trainable circuit.
    pub block: usize,
}

impl Default for CircuitSection {
    fn default() -> Self {
        CircuitSection { qubits: 15, depth: 1, block: 3 }
    }
}

/// `[lo, hi, points]` for one axis of a grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis(pub f64, pub f64, pub usize);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub h1: Axis,
    pub h2: Axis,
    /// Trained model to classify with; the exact circuit when absent.
    pub model: Option<PathBuf>,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection { h1: Axis(0.0, 2.0, 21), h2: Axis(0.0, 0.0, 1), model: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainSection {
    pub points: usize,
    pub line: Line,
    /// Independent random initializations; the lowest final MSE is kept.
    pub restarts: usize,
    pub driver: BoldDriver,
}

impl Default for TrainSection {
    fn default() -> Self {
        TrainSection { points: 40, line: Line::default(), restarts: 5, driver: BoldDriver::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QecSection {
    pub p_x: f64,
    pub p_y: f64,
    pub p_z: f64,
    pub p_xx: f64,
    pub restarts: usize,
    pub max_iter: usize,
    /// Total physical rates for `qec-curve`, at the ratios above.
    pub totals: Vec<f64>,
    /// Trained code for `qec-curve`; trained on the spot when absent.
    pub code: Option<PathBuf>,
}

impl Default for QecSection {
    fn default() -> Self {
        QecSection {
            p_x: 5.8e-3,
            p_y: 2e-3,
            p_z: 2e-3,
            p_xx: 2e-4,
            restarts: 10,
            max_iter: 2000,
            totals: vec![2e-3, 5e-3, 1e-2, 2e-2, 4e-2],
            code: None,
        }
    }
}

impl QecSection {
    pub fn error_model(&self) -> Result<ErrorModel> {
        ErrorModel::new(self.p_x, self.p_y, self.p_z, self.p_xx)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ComplexitySection {
    /// Single query; the line comparison runs when absent.
    pub p: Option<f64>,
    pub p0: f64,
    pub line: Line,
    pub points: usize,
    /// Site counts of the comparison strings; `⌊N/2⌋` when empty.
    pub sop_lengths: Vec<usize>,
}

impl Default for ComplexitySection {
    fn default() -> Self {
        ComplexitySection { p: None, p0: 0.5, line: Line::default(), points: 21, sop_lengths: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SopSection {
    /// Readout site in the final register; the middle when absent.
    pub site: Option<usize>,
}

impl Default for SopSection {
    fn default() -> Self {
        SopSection { site: None }
    }
}

/// One run of one command. Every field has a default, so an empty file is valid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub seed: u64,
    /// Largest register simulated as a state vector.
    pub cap_qubits: usize,
    pub out: PathBuf,
    pub circuit: CircuitSection,
    pub sweep: SweepSection,
    pub train: TrainSection,
    pub qec: QecSection,
    pub complexity: ComplexitySection,
    pub sop: SopSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: None,
            seed: 0,
            cap_qubits: 21,
            out: PathBuf::from("out"),
            circuit: CircuitSection::default(),
            sweep: SweepSection::default(),
            train: TrainSection::default(),
            qec: QecSection::default(),
            complexity: ComplexitySection::default(),
            sop: SopSection::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(s: &str) -> Result<RunConfig> {
        let c: RunConfig = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        RunConfig::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Range checks that the type system does not cover.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.cap_qubits == 0 || self.cap_qubits > 30 {
            return bad(format!("cap_qubits must be in 1..=30, got {}", self.cap_qubits));
        }
        let c = &self.circuit;
        if c.qubits == 0 || c.depth == 0 || c.block < 2 {
            return bad("circuit needs qubits ≥ 1, depth ≥ 1 and block ≥ 2".into());
        }
        for (name, a) in [("sweep.h1", self.sweep.h1), ("sweep.h2", self.sweep.h2)] {
            if a.2 == 0 || !a.0.is_finite() || !a.1.is_finite() {
                return bad(format!("{name} needs finite ends and at least one point"));
            }
        }
        if self.train.points == 0 || self.train.restarts == 0 || self.train.driver.max_iter == 0 {
            return bad("train needs points, restarts and driver.max_iter ≥ 1".into());
        }
        if self.train.driver.epsilon <= 0.0 || self.train.driver.eta0 <= 0.0 {
            return bad("train.driver needs positive epsilon and eta0".into());
        }
        self.qec.error_model().map_err(|e| Error::Config(format!("qec: {e}")))?;
        if self.qec.restarts == 0 || self.qec.max_iter == 0 {
            return bad("qec needs restarts and max_iter ≥ 1".into());
        }
        if self.qec.totals.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return bad("qec.totals must lie in [0, 1]".into());
        }
        let x = &self.complexity;
        if !(0.0..=1.0).contains(&x.p0) || x.p.is_some_and(|p| !(0.0..=1.0).contains(&p)) {
            return bad("complexity.p and p0 must lie in [0, 1]".into());
        }
        if x.points == 0 {
            return bad("complexity.points must be at least 1".into());
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(json))
    }

    /// Output directory, with the environment override applied.
    pub fn out_dir(&self) -> PathBuf {
        std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| self.out.clone())
    }

    pub fn metadata(&self) -> Metadata {
        Metadata {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: self.command.map(|c| c.name().to_string()),
            seed: self.seed,
            config_hash: self.hash(),
            ordering_version: ORDERING_VERSION,
            config: self.clone(),
        }
    }
}

/// Enough to replay a run: the full config, its hash and the versions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub command: Option<String>,
    pub seed: u64,
    pub config_hash: String,
    pub ordering_version: u32,
    pub config: RunConfig,
}

impl Metadata {
    /// True when the embedded config still hashes to the recorded value.
    pub fn is_consistent(&self) -> bool {
        self.config.hash() == self.config_hash
    }
}

/// A JSON artifact with the run metadata next to its own fields.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub metadata: Metadata,
    #[serde(flatten)]
    pub body: T,
}
