// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Heisenberg-picture evaluation of the block-factorized code on fixed-size
//! arrays. Pauli noise is diagonal in the three-qubit Pauli basis, so each
//! output Bloch component is obtained by pulling `σ_i` on the data qubit
//! back through decoder, noise and encoder. Used inside the optimizer;
//! `channel` holds the tomography route it is checked against.

use nalgebra::{Matrix3, Vector3};

use super::error_model::ErrorModel;
use crate::sim::linalg::{CMat, C64};
use crate::sim::BlochAffineMap;

type M8 = [C64; 64];

const Z0: C64 = C64::new(0.0, 0.0);

#[inline]
fn at(r: usize, c: usize) -> usize {
    r * 8 + c
}

pub fn to_m8(m: &CMat) -> M8 {
    let mut out = [Z0; 64];
    for r in 0..8 {
        for c in 0..8 {
            out[at(r, c)] = m[(r, c)];
        }
    }
    out
}

fn matmul(a: &M8, b: &M8) -> M8 {
    let mut out = [Z0; 64];
    for r in 0..8 {
        for k in 0..8 {
            let x = a[at(r, k)];
            if x == Z0 {
                continue;
            }
            for c in 0..8 {
                out[at(r, c)] += x * b[at(k, c)];
            }
        }
    }
    out
}

fn adjoint(a: &M8) -> M8 {
    let mut out = [Z0; 64];
    for r in 0..8 {
        for c in 0..8 {
            out[at(c, r)] = a[at(r, c)].conj();
        }
    }
    out
}

/// In-place change of basis from matrix entries to Pauli coefficients on
/// qubit `q`: the 2×2 sub-block at (row bit, column bit) becomes the
/// coefficients of I, X, Y, Z at positions (0,0), (0,1), (1,0), (1,1).
fn to_pauli_axis(m: &mut M8, q: usize) {
    let bit = 1usize << q;
    for r in 0..8 {
        if r & bit != 0 {
            continue;
        }
        for c in 0..8 {
            if c & bit != 0 {
                continue;
            }
            let (y00, y01, y10, y11) = (m[at(r, c)], m[at(r, c | bit)], m[at(r | bit, c)], m[at(r | bit, c | bit)]);
            m[at(r, c)] = (y00 + y11) * 0.5;
            m[at(r, c | bit)] = (y01 + y10) * 0.5;
            m[at(r | bit, c)] = (y01 - y10) * C64::new(0.0, 0.5);
            m[at(r | bit, c | bit)] = (y00 - y11) * 0.5;
        }
    }
}

fn from_pauli_axis(m: &mut M8, q: usize) {
    let bit = 1usize << q;
    for r in 0..8 {
        if r & bit != 0 {
            continue;
        }
        for c in 0..8 {
            if c & bit != 0 {
                continue;
            }
            let (ai, ax, ay, az) = (m[at(r, c)], m[at(r, c | bit)], m[at(r | bit, c)], m[at(r | bit, c | bit)]);
            m[at(r, c)] = ai + az;
            m[at(r, c | bit)] = ax - ay * C64::new(0.0, 1.0);
            m[at(r | bit, c)] = ax + ay * C64::new(0.0, 1.0);
            m[at(r | bit, c | bit)] = ai - az;
        }
    }
}

/// Letter index (0=I, 1=X, 2=Y, 3=Z) of qubit `q` at a transformed position.
#[inline]
fn letter(r: usize, c: usize, q: usize) -> usize {
    2 * ((r >> q) & 1) + ((c >> q) & 1)
}

/// Pauli eigenvalues `λ_P` of the block noise, indexed by transformed position.
#[derive(Clone, Debug)]
pub struct BlockNoise {
    lambda: [f64; 64],
}

impl BlockNoise {
    pub fn new(em: &ErrorModel, block: usize) -> BlockNoise {
        let single = [1.0, 1.0 - 2.0 * (em.p_y + em.p_z), 1.0 - 2.0 * (em.p_x + em.p_z), 1.0 - 2.0 * (em.p_x + em.p_y)];
        let pairs = em.block_pairs(block);
        let mut lambda = [0.0; 64];
        for r in 0..8 {
            for c in 0..8 {
                let mut l = 1.0;
                for q in 0..3 {
                    l *= single[letter(r, c, q)];
                }
                for &(a, b) in &pairs {
                    // XX anticommutes with P when Y/Z letters on the pair have odd count
                    let z_like = |q: usize| matches!(letter(r, c, q), 2 | 3) as usize;
                    if (z_like(a) + z_like(b)) % 2 == 1 {
                        l *= 1.0 - 2.0 * em.p_xx;
                    }
                }
                lambda[at(r, c)] = l;
            }
        }
        BlockNoise { lambda }
    }

    fn apply(&self, m: &mut M8) {
        for q in 0..3 {
            to_pauli_axis(m, q);
        }
        for (x, l) in m.iter_mut().zip(self.lambda.iter()) {
            *x *= *l;
        }
        for q in 0..3 {
            from_pauli_axis(m, q);
        }
    }
}

/// Data-qubit Pauli `σ_i` (i = 0, 1, 2 for X, Y, Z) on local qubit 1.
fn data_pauli(i: usize) -> M8 {
    let mut m = [Z0; 64];
    for col in 0..8 {
        let b = (col >> 1) & 1;
        let (row, ph) = match i {
            0 => (col ^ 2, C64::new(1.0, 0.0)),
            1 => (col ^ 2, if b == 0 { C64::new(0.0, 1.0) } else { C64::new(0.0, -1.0) }),
            _ => (col, if b == 0 { C64::new(1.0, 0.0) } else { C64::new(-1.0, 0.0) }),
        };
        m[at(row, col)] = ph;
    }
    m
}

/// Reads `c_i = tr(K)/2` and `M_ij = tr(K σ_j)/2` from the data block `K` of
/// `U X U†` restricted to ancillas in |0⟩ (indices 0 and 2).
fn read_block(u: &M8, x: &M8) -> (f64, [f64; 3]) {
    let s = [0usize, 2];
    let mut k = [[Z0; 2]; 2];
    for (a, &ra) in s.iter().enumerate() {
        for (b, &rb) in s.iter().enumerate() {
            let mut acc = Z0;
            for p in 0..8 {
                let ua = u[at(ra, p)];
                if ua == Z0 {
                    continue;
                }
                for q in 0..8 {
                    acc += ua * x[at(p, q)] * u[at(rb, q)].conj();
                }
            }
            k[a][b] = acc;
        }
    }
    let tr = (k[0][0] + k[1][1]).re / 2.0;
    let mx = (k[0][1] + k[1][0]).re / 2.0;
    // tr(K Y) = i(K01 − K10)
    let my = ((k[0][1] - k[1][0]) * C64::new(0.0, 1.0)).re / 2.0;
    let mz = (k[0][0] - k[1][1]).re / 2.0;
    (tr, [mx, my, mz])
}

/// Effective single-qubit channel of one block for decoder `u1`.
pub fn block_map(u1: &M8, noise: &BlockNoise) -> BlochAffineMap {
    let ud = adjoint(u1);
    let mut m = Matrix3::zeros();
    let mut c = Vector3::zeros();
    for i in 0..3 {
        let mut b = matmul(&ud, &matmul(&data_pauli(i), u1));
        noise.apply(&mut b);
        let (ci, row) = read_block(u1, &b);
        c[i] = ci;
        for j in 0..3 {
            m[(i, j)] = row[j];
        }
    }
    BlochAffineMap { m, c }
}

/// Applies the Heisenberg duals of three single-qubit affine maps.
fn apply_dual_maps(x: &mut M8, maps: &[BlochAffineMap; 3]) {
    for q in 0..3 {
        to_pauli_axis(x, q);
    }
    for (q, map) in maps.iter().enumerate() {
        let bit = 1usize << q;
        for r in 0..8 {
            if r & bit != 0 {
                continue;
            }
            for cc in 0..8 {
                if cc & bit != 0 {
                    continue;
                }
                let idx = [at(r, cc), at(r, cc | bit), at(r | bit, cc), at(r | bit, cc | bit)];
                let a = [x[idx[0]], x[idx[1]], x[idx[2]], x[idx[3]]];
                let mut out = [a[0], Z0, Z0, Z0];
                for i in 0..3 {
                    out[0] += a[i + 1] * map.c[i];
                    for j in 0..3 {
                        out[j + 1] += a[i + 1] * map.m[(i, j)];
                    }
                }
                for (k, v) in idx.iter().zip(out) {
                    x[*k] = v;
                }
            }
        }
    }
    for q in 0..3 {
        from_pauli_axis(x, q);
    }
}

/// Logical channel of the outer layer `u2` around three block channels.
pub fn composite_map(u2: &M8, maps: &[BlochAffineMap; 3]) -> BlochAffineMap {
    let ud = adjoint(u2);
    let mut m = Matrix3::zeros();
    let mut c = Vector3::zeros();
    for i in 0..3 {
        let mut b = matmul(&ud, &matmul(&data_pauli(i), u2));
        apply_dual_maps(&mut b, maps);
        let (ci, row) = read_block(u2, &b);
        c[i] = ci;
        for j in 0..3 {
            m[(i, j)] = row[j];
        }
    }
    BlochAffineMap { m, c }
}

/// All three block maps, reusing the first when the noise pattern repeats.
pub fn block_maps(u1: &M8, em: &ErrorModel) -> [BlochAffineMap; 3] {
    let n0 = BlockNoise::new(em, 0);
    let m0 = block_map(u1, &n0);
    let pick = |b: usize| if em.block_pairs(b) == em.block_pairs(0) { m0 } else { block_map(u1, &BlockNoise::new(em, b)) };
    [m0, pick(1), pick(2)]
}
