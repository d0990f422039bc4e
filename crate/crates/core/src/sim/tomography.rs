// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact single-qubit process tomography in the Bloch picture.

use nalgebra::{Matrix3, Vector3};

use super::density::DensityMatrix;
use crate::{Error, Result};

/// `r ↦ M r + c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochAffineMap {
    pub m: Matrix3<f64>,
    pub c: Vector3<f64>,
}

impl BlochAffineMap {
    pub fn identity() -> BlochAffineMap {
        BlochAffineMap { m: Matrix3::identity(), c: Vector3::zeros() }
    }

    pub fn apply(&self, r: [f64; 3]) -> [f64; 3] {
        let v = self.m * Vector3::from(r) + self.c;
        [v[0], v[1], v[2]]
    }

    /// Singular values of `M`, descending.
    pub fn singular_values(&self) -> [f64; 3] {
        let mut s: Vec<f64> = self.m.svd(false, false).singular_values.iter().cloned().collect();
        s.sort_by(|a, b| b.partial_cmp(a).unwrap());
        [s[0], s[1], s[2]]
    }

    pub fn compose(&self, inner: &BlochAffineMap) -> BlochAffineMap {
        BlochAffineMap { m: self.m * inner.m, c: self.m * inner.c + self.c }
    }

    /// Acts on an arbitrary 2×2 operator by linearity, `A = (t·1 + v·σ)/2`.
    pub fn apply_operator(&self, a: &super::linalg::CMat) -> super::linalg::CMat {
        use super::linalg::{identity, pauli_x, pauli_y, pauli_z, C64};
        let t = a.trace();
        let v = [(a * pauli_x()).trace(), (a * pauli_y()).trace(), (a * pauli_z()).trace()];
        let mut w = [t * self.c[0], t * self.c[1], t * self.c[2]];
        for (i, wi) in w.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                *wi += vj * self.m[(i, j)];
            }
        }
        (identity(2) * t + pauli_x() * w[0] + pauli_y() * w[1] + pauli_z() * w[2]) * C64::new(0.5, 0.0)
    }
}

/// Reconstructs the affine map of a trace-preserving single-qubit channel
/// from its action on |+x⟩, |+y⟩, |+z⟩ and 1/2.
pub fn process_tomography_1q<F>(channel: F) -> Result<BlochAffineMap>
where
    F: Fn(&DensityMatrix) -> Result<DensityMatrix>,
{
    let run = |rho: DensityMatrix| -> Result<[f64; 3]> {
        let out = channel(&rho)?;
        let dev = (out.trace().re - 1.0).abs().max(out.trace().im.abs());
        if dev > 1e-8 {
            return Err(Error::NotTracePreserving(dev));
        }
        out.bloch()
    };
    let c = run(DensityMatrix::maximally_mixed(1))?;
    let mut m = Matrix3::zeros();
    for mu in 0..3 {
        let mut r = [0.0; 3];
        r[mu] = 1.0;
        let b = run(DensityMatrix::from_bloch(r))?;
        for i in 0..3 {
            m[(i, mu)] = b[i] - c[i];
        }
    }
    Ok(BlochAffineMap { m, c: Vector3::from(c) })
}
