// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Kraus channels, including the Pauli and correlated-XX noise channels.

use super::linalg::{self, CMat, C64};
use super::pauli::Pauli;
use crate::{Error, Result};

pub const COMPLETENESS_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    pub targets: Vec<usize>,
    pub kraus_ops: Vec<CMat>,
}

impl KrausChannel {
    /// Rejects Kraus sets with `‖Σ K†K − 1‖_max > 1e-12`.
    pub fn new(targets: Vec<usize>, kraus_ops: Vec<CMat>) -> Result<KrausChannel> {
        let dim = 1usize << targets.len();
        for k in &kraus_ops {
            if k.nrows() != dim || k.ncols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: k.nrows() });
            }
        }
        let ch = KrausChannel { targets, kraus_ops };
        let dev = ch.completeness_error();
        if dev > COMPLETENESS_TOL {
            return Err(Error::IncompleteKraus(dev));
        }
        Ok(ch)
    }

    pub fn completeness_error(&self) -> f64 {
        let dim = 1usize << self.targets.len();
        let mut s = CMat::zeros(dim, dim);
        for k in &self.kraus_ops {
            s += k.adjoint() * k;
        }
        linalg::max_abs_diff(&s, &linalg::identity(dim))
    }

    /// `ρ ↦ (1 − Σp)ρ + Σ_μ p_μ σ_μ ρ σ_μ`, zero-weight terms omitted.
    pub fn pauli(q: usize, px: f64, py: f64, pz: f64) -> Result<KrausChannel> {
        validate_probs(px, py, pz)?;
        let p0 = 1.0 - px - py - pz;
        let mut ops = Vec::with_capacity(4);
        for (p, l) in [(p0, Pauli::I), (px, Pauli::X), (py, Pauli::Y), (pz, Pauli::Z)] {
            if p > 0.0 {
                ops.push(l.matrix() * C64::new(p.sqrt(), 0.0));
            }
        }
        KrausChannel::new(vec![q], ops)
    }

    /// `ρ ↦ (1 − p)ρ + p·XX ρ XX` on the pair `(a, b)`.
    pub fn correlated_xx(a: usize, b: usize, p: f64) -> Result<KrausChannel> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("probability {p} outside [0, 1]")));
        }
        let xx = linalg::kron(&linalg::pauli_x(), &linalg::pauli_x());
        let mut ops = vec![linalg::identity(4) * C64::new((1.0 - p).sqrt(), 0.0)];
        if p > 0.0 {
            ops.push(xx * C64::new(p.sqrt(), 0.0));
        }
        KrausChannel::new(vec![a, b], ops)
    }
}

pub(crate) fn validate_probs(px: f64, py: f64, pz: f64) -> Result<()> {
    for p in [px, py, pz] {
        if !(p >= 0.0) {
            return Err(Error::InvalidArgument(format!("negative probability {p}")));
        }
    }
    if px + py + pz > 1.0 + 1e-15 {
        return Err(Error::InvalidArgument("p_x + p_y + p_z exceeds 1".into()));
    }
    Ok(())
}
