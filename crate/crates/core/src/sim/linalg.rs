// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Small dense helpers shared by the simulators.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(dim: usize) -> CMat {
    CMat::identity(dim, dim)
}

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

pub fn hadamard() -> CMat {
    let s = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    CMat::from_row_slice(2, 2, &[s, s, s, -s])
}

/// Kronecker product with `a` on the high bits: `kron(a, b)[(i_a, i_b)]`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Largest absolute entry of `U†U − I`.
pub fn unitarity_error(m: &CMat) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let p = m.adjoint() * m;
    max_abs_diff(&p, &identity(m.nrows()))
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn hermiticity_error(m: &CMat) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Row-major copy of the entries, the layout the stride kernels read.
pub fn row_major(m: &CMat) -> Vec<C64> {
    let (r, cols) = m.shape();
    let mut out = Vec::with_capacity(r * cols);
    for i in 0..r {
        for j in 0..cols {
            out.push(m[(i, j)]);
        }
    }
    out
}

/// Inserts zero bits at the given ascending positions.
#[inline]
pub(crate) fn insert_zero_bits(mut v: usize, sorted_positions: &[usize]) -> usize {
    for &p in sorted_positions {
        let low = v & ((1usize << p) - 1);
        v = ((v >> p) << (p + 1)) | low;
    }
    v
}

/// Applies a `2^k × 2^k` row-major matrix to the bits `targets` of a flat
/// amplitude array. Bit `j` of the matrix index addresses `targets[j]`.
pub(crate) fn apply_kernel(amps: &mut [C64], targets: &[usize], m: &[C64]) {
    let k = targets.len();
    let dim = 1usize << k;
    debug_assert_eq!(m.len(), dim * dim);
    let mut sorted = targets.to_vec();
    sorted.sort_unstable();
    let offsets: Vec<usize> = (0..dim)
        .map(|j| {
            targets
                .iter()
                .enumerate()
                .filter(|(b, _)| (j >> b) & 1 == 1)
                .fold(0usize, |acc, (_, &t)| acc | (1 << t))
        })
        .collect();
    let blocks = amps.len() >> k;
    let mut buf = vec![C64::new(0.0, 0.0); dim];
    if k == 1 {
        let (m00, m01, m10, m11) = (m[0], m[1], m[2], m[3]);
        let off = offsets[1];
        for blk in 0..blocks {
            let i0 = insert_zero_bits(blk, &sorted);
            let a0 = amps[i0];
            let a1 = amps[i0 | off];
            amps[i0] = m00 * a0 + m01 * a1;
            amps[i0 | off] = m10 * a0 + m11 * a1;
        }
        return;
    }
    for blk in 0..blocks {
        let base = insert_zero_bits(blk, &sorted);
        for (b, &o) in buf.iter_mut().zip(offsets.iter()) {
            *b = amps[base | o];
        }
        for (r, &o) in offsets.iter().enumerate() {
            let row = &m[r * dim..(r + 1) * dim];
            let mut acc = C64::new(0.0, 0.0);
            for (x, y) in row.iter().zip(buf.iter()) {
                acc += x * y;
            }
            amps[base | o] = acc;
        }
    }
}

pub(crate) fn check_targets(targets: &[usize], num_qubits: usize) -> crate::Result<()> {
    for (i, &t) in targets.iter().enumerate() {
        if t >= num_qubits {
            return Err(crate::Error::QubitOutOfRange { qubit: t, num_qubits });
        }
        if targets[..i].contains(&t) {
            return Err(crate::Error::DuplicateTarget(t));
        }
    }
    Ok(())
}
