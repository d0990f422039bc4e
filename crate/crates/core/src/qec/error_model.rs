// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Pauli noise on every physical qubit followed by correlated XX flips.

use serde::{Deserialize, Serialize};

use crate::sim::channel::validate_probs;
use crate::sim::{DensityMatrix, KrausChannel};
use crate::{Error, Result};

/// Physical qubits of the code.
pub const NUM_PHYSICAL: usize = 9;

/// Default correlated pairs, 0-based: neighbours inside each block of three.
pub const DEFAULT_PAIRS: [(usize, usize); 6] = [(0, 1), (1, 2), (3, 4), (4, 5), (6, 7), (7, 8)];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorModel {
    pub p_x: f64,
    pub p_y: f64,
    pub p_z: f64,
    #[serde(default)]
    pub p_xx: f64,
    /// 0-based qubit pairs hit by the XX channel.
    #[serde(default = "default_pairs")]
    pub pairs: Vec<(usize, usize)>,
}

fn default_pairs() -> Vec<(usize, usize)> {
    DEFAULT_PAIRS.to_vec()
}

/// On-disk form: 1-based `pair_set`, as the pairs are usually written.
#[derive(Clone, Debug, Deserialize, Serialize)]
struct ErrorModelFile {
    p_x: f64,
    p_y: f64,
    p_z: f64,
    #[serde(default)]
    p_xx: f64,
    #[serde(default)]
    pair_set: Option<Vec<(usize, usize)>>,
}

impl ErrorModel {
    pub fn new(p_x: f64, p_y: f64, p_z: f64, p_xx: f64) -> Result<ErrorModel> {
        let em = ErrorModel { p_x, p_y, p_z, p_xx, pairs: default_pairs() };
        em.validate()?;
        Ok(em)
    }

    pub fn noiseless() -> ErrorModel {
        ErrorModel { p_x: 0.0, p_y: 0.0, p_z: 0.0, p_xx: 0.0, pairs: default_pairs() }
    }

    /// `p_y = p_z`, `p_x = ratio · p_y`, with `p_x + p_y + p_z = total`.
    pub fn anisotropic(total: f64, ratio: f64) -> Result<ErrorModel> {
        let py = total / (ratio + 2.0);
        ErrorModel::new(ratio * py, py, py, 0.0)
    }

    pub fn isotropic(total: f64) -> Result<ErrorModel> {
        ErrorModel::new(total / 3.0, total / 3.0, total / 3.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        validate_probs(self.p_x, self.p_y, self.p_z)?;
        if !(0.0..=1.0).contains(&self.p_xx) {
            return Err(Error::InvalidArgument(format!("p_xx = {} outside [0, 1]", self.p_xx)));
        }
        for &(a, b) in &self.pairs {
            if a >= NUM_PHYSICAL || b >= NUM_PHYSICAL || a == b {
                return Err(Error::InvalidArgument(format!("bad pair ({a}, {b})")));
            }
        }
        Ok(())
    }

    /// Sum of all probabilities, the x axis of rate curves.
    pub fn total_rate(&self) -> f64 {
        self.p_x + self.p_y + self.p_z + self.p_xx
    }

    /// Same ratios, total rescaled.
    pub fn with_total(&self, total: f64) -> Result<ErrorModel> {
        let t = self.total_rate();
        if t <= 0.0 {
            return Err(Error::InvalidArgument("cannot rescale a noiseless model".into()));
        }
        let s = total / t;
        let em = ErrorModel { p_x: self.p_x * s, p_y: self.p_y * s, p_z: self.p_z * s, p_xx: self.p_xx * s, pairs: self.pairs.clone() };
        em.validate()?;
        Ok(em)
    }

    pub fn single_qubit_channel(&self, q: usize) -> Result<KrausChannel> {
        KrausChannel::pauli(q, self.p_x, self.p_y, self.p_z)
    }

    /// Pairs lying inside block `b`, in local indices.
    pub fn block_pairs(&self, block: usize) -> Vec<(usize, usize)> {
        let lo = 3 * block;
        self.pairs
            .iter()
            .filter(|(a, b)| (lo..lo + 3).contains(a) && (lo..lo + 3).contains(b))
            .map(|(a, b)| (a - lo, b - lo))
            .collect()
    }

    /// True when every pair stays inside one block, so the channel factorizes.
    pub fn is_block_local(&self) -> bool {
        self.pairs.iter().all(|(a, b)| a / 3 == b / 3)
    }

    /// N₁ on qubits ascending, then N₂ on the pairs in order.
    pub fn apply(&self, rho: &mut DensityMatrix, qubits: &[usize], pairs: &[(usize, usize)]) -> Result<()> {
        for &q in qubits {
            rho.apply_channel(&self.single_qubit_channel(q)?)?;
        }
        if self.p_xx > 0.0 {
            for &(a, b) in pairs {
                rho.apply_channel(&KrausChannel::correlated_xx(a, b, self.p_xx)?)?;
            }
        }
        Ok(())
    }

    pub fn from_toml(s: &str) -> Result<ErrorModel> {
        let f: ErrorModelFile = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        ErrorModel::from_file_form(f)
    }

    pub fn from_json(s: &str) -> Result<ErrorModel> {
        let f: ErrorModelFile = serde_json::from_str(s)?;
        ErrorModel::from_file_form(f)
    }

    fn from_file_form(f: ErrorModelFile) -> Result<ErrorModel> {
        let pairs = match f.pair_set {
            Some(ps) => ps
                .into_iter()
                .map(|(a, b)| {
                    if a == 0 || b == 0 {
                        Err(Error::Config("pair_set is 1-based".into()))
                    } else {
                        Ok((a - 1, b - 1))
                    }
                })
                .collect::<Result<Vec<_>>>()?,
            None => default_pairs(),
        };
        let em = ErrorModel { p_x: f.p_x, p_y: f.p_y, p_z: f.p_z, p_xx: f.p_xx, pairs };
        em.validate()?;
        Ok(em)
    }

    pub fn to_toml(&self) -> String {
        let f = ErrorModelFile {
            p_x: self.p_x,
            p_y: self.p_y,
            p_z: self.p_z,
            p_xx: self.p_xx,
            pair_set: Some(self.pairs.iter().map(|(a, b)| (a + 1, b + 1)).collect()),
        };
        toml::to_string(&f).expect("plain struct serializes")
    }
}
