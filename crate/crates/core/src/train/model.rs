// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Trainable QCNN.
//!
//! Each convolution-pooling unit on an active chain of length `L`:
//!
//! * `C1`: on windows of `n+1` qubits starting at every `n`-th qubit, a
//!   product of two-qubit unitaries over all pairs of the window. For `n = 3`
//!   the product is `U(23) U(24) U(13) U(14) U(12) U(34)` (1-based window
//!   positions, rightmost first). Pairs leaving the chain are dropped.
//!   Windows run left to right.
//! * `C2 … C(n+1)`: one `n`-qubit unitary per layer, tiled on blocks starting
//!   at offset `j − 2` for `Cj`. Blocks that do not fit are dropped.
//! * Pooling: in every block of `n`, all qubits but the middle one are
//!   measured in Z. A −1 outcome on the `j`-th measured qubit of a block
//!   applies `Vj` to the block's survivor.
//!
//! After `d` units an arbitrary unitary `F` acts on the remaining `N/n^d`
//! qubits; the output is the probability of Z = +1 on the middle one.
//! Every layer shares one parameter vector across all its windows, and each
//! depth has its own parameters.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exact::{CircuitDescription, Element, GateKind, Marker, Readout};
use crate::sim::gate::controlled_gate;
use crate::sim::gellmann::exp_minus_i_hermitian;
use crate::sim::linalg::{CMat, C64};
use crate::sim::{Basis, GellMannBasis, StateVector, UnitaryGate};
use crate::{Error, Result};

/// Largest fully connected register accepted; `F` has `4^m − 1` parameters.
pub const MAX_FINAL_WIDTH: usize = 7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QcnnHyperparams {
    /// Block size: each unit maps `L → L/n`.
    pub n: usize,
    pub d: usize,
    pub num_qubits: usize,
}

impl QcnnHyperparams {
    pub fn new(n: usize, d: usize, num_qubits: usize) -> Result<QcnnHyperparams> {
        let h = QcnnHyperparams { n, d, num_qubits };
        h.validate()?;
        Ok(h)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidArgument(format!("block size must be at least 2, got {}", self.n)));
        }
        let div = self
            .n
            .checked_pow(self.d as u32)
            .ok_or_else(|| Error::InvalidArgument("n^d overflows".into()))?;
        if self.num_qubits == 0 || self.num_qubits % div != 0 {
            return Err(Error::InvalidArgument(format!(
                "N = {} is not divisible by n^d = {div}",
                self.num_qubits
            )));
        }
        if self.final_width() > MAX_FINAL_WIDTH {
            return Err(Error::InvalidArgument(format!(
                "fully connected layer on {} qubits exceeds the limit of {MAX_FINAL_WIDTH}",
                self.final_width()
            )));
        }
        Ok(())
    }

    pub fn final_width(&self) -> usize {
        self.num_qubits / self.n.pow(self.d as u32)
    }

    /// Two-qubit factors of `C1` in application order, 0-based window positions.
    pub fn c1_pairs(&self) -> Vec<(usize, usize)> {
        if self.n == 3 {
            // U(23) U(24) U(13) U(14) U(12) U(34), rightmost first
            return vec![(2, 3), (0, 1), (0, 3), (0, 2), (1, 3), (1, 2)];
        }
        let mut p = Vec::new();
        for a in 0..=self.n {
            for b in a + 1..=self.n {
                p.push((a, b));
            }
        }
        p
    }

    /// Parameter segments in storage order.
    pub fn layout(&self) -> Vec<Segment> {
        let mut out = Vec::new();
        let mut offset = 0;
        let mut push = |name: String, depth: usize, qubits: usize| {
            let len = (1usize << (2 * qubits)) - 1;
            out.push(Segment { name, depth, qubits, offset, len });
            offset += len;
        };
        for depth in 1..=self.d {
            for (a, b) in self.c1_pairs() {
                push(format!("C1({}{})", a + 1, b + 1), depth, 2);
            }
            for j in 2..=self.n + 1 {
                push(format!("C{j}"), depth, self.n);
            }
            for j in 1..self.n {
                push(format!("V{j}"), depth, 1);
            }
        }
        push("F".into(), self.d + 1, self.final_width());
        out
    }

    pub fn num_params(&self) -> usize {
        self.layout().iter().map(|s| s.len).sum()
    }
}

/// A contiguous block of the parameter vector parameterizing one unitary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub name: String,
    /// Unit depth, or `d + 1` for the fully connected layer.
    pub depth: usize,
    pub qubits: usize,
    pub offset: usize,
    pub len: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainableCircuit {
    pub hyperparams: QcnnHyperparams,
    pub params: Vec<f64>,
}

/// Unitaries instantiated from a parameter vector.
#[derive(Clone, Debug)]
struct Compiled {
    unit_gates: Vec<UnitaryGate>,
    f: CMat,
}

pub fn build_trainable(h: &QcnnHyperparams, params: Vec<f64>) -> Result<TrainableCircuit> {
    h.validate()?;
    if params.len() != h.num_params() {
        return Err(Error::DimensionMismatch { expected: h.num_params(), got: params.len() });
    }
    Ok(TrainableCircuit { hyperparams: h.clone(), params })
}

/// One pooling record: survivor, measured qubits in block order.
#[derive(Clone, Debug)]
struct PoolBlock {
    survivor: usize,
    measured: Vec<usize>,
}

/// Windows for each layer of one unit on chain `a`.
fn unit_plan(h: &QcnnHyperparams, a: &[usize]) -> (Vec<Vec<usize>>, Vec<Vec<Vec<usize>>>, Vec<PoolBlock>) {
    let n = h.n;
    let l = a.len();
    let c1: Vec<Vec<usize>> = (0..l).step_by(n).map(|w| (w..(w + n + 1).min(l)).collect()).collect();
    let cj: Vec<Vec<Vec<usize>>> = (2..=n + 1)
        .map(|j| {
            let off = j - 2;
            (off..l).step_by(n).filter(|s| s + n <= l).map(|s| (s..s + n).map(|p| a[p]).collect()).collect()
        })
        .collect();
    let pools = (0..l / n)
        .map(|b| {
            let mid = b * n + n / 2;
            PoolBlock { survivor: a[mid], measured: (b * n..b * n + n).filter(|&p| p != mid).map(|p| a[p]).collect() }
        })
        .collect();
    // C1 windows as chain positions; map to qubits
    let c1 = c1.into_iter().map(|w| w.into_iter().map(|p| a[p]).collect()).collect();
    (c1, cj, pools)
}

impl TrainableCircuit {
    /// Uniform draws in [0, 2π).
    pub fn random<R: rand::Rng + ?Sized>(h: &QcnnHyperparams, rng: &mut R) -> Result<TrainableCircuit> {
        let params = (0..h.num_params()).map(|_| rng.random::<f64>() * std::f64::consts::TAU).collect();
        build_trainable(h, params)
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    fn segment_unitary(&self, params: &[f64], seg: &Segment) -> Result<CMat> {
        let basis = GellMannBasis::for_qubits(seg.qubits)?;
        Ok(exp_minus_i_hermitian(basis.hamiltonian(&params[seg.offset..seg.offset + seg.len])?))
    }

    fn compile_units(&self, params: &[f64]) -> Result<Vec<UnitaryGate>> {
        let h = &self.hyperparams;
        let layout = h.layout();
        let mut gates = Vec::new();
        let mut active: Vec<usize> = (0..h.num_qubits).collect();
        let pairs = h.c1_pairs();
        for depth in 1..=h.d {
            let segs: Vec<&Segment> = layout.iter().filter(|s| s.depth == depth).collect();
            let mats = segs.iter().map(|s| self.segment_unitary(params, s)).collect::<Result<Vec<_>>>()?;
            let (c1, cj, pools) = unit_plan(h, &active);
            for w in &c1 {
                for (p, &(x, y)) in pairs.iter().enumerate() {
                    if x < w.len() && y < w.len() {
                        gates.push(UnitaryGate { targets: vec![w[x], w[y]], matrix: mats[p].clone() });
                    }
                }
            }
            for (j, blocks) in cj.iter().enumerate() {
                for b in blocks {
                    gates.push(UnitaryGate { targets: b.clone(), matrix: mats[pairs.len() + j].clone() });
                }
            }
            let v0 = pairs.len() + h.n;
            for blk in &pools {
                for (j, &m) in blk.measured.iter().enumerate() {
                    let v = UnitaryGate { targets: vec![blk.survivor], matrix: mats[v0 + j].clone() };
                    gates.push(controlled_gate(&[(m, Basis::Z, -1)], &v));
                }
            }
            active = pools.iter().map(|b| b.survivor).collect();
        }
        Ok(gates)
    }

    fn compile(&self, params: &[f64]) -> Result<Compiled> {
        let f_seg = self.hyperparams.layout().pop().expect("layout ends with F");
        Ok(Compiled { unit_gates: self.compile_units(params)?, f: self.segment_unitary(params, &f_seg)? })
    }

    /// Qubits left for the fully connected layer, in chain order.
    pub fn final_register(&self) -> Vec<usize> {
        let h = &self.hyperparams;
        let mut active: Vec<usize> = (0..h.num_qubits).collect();
        for _ in 0..h.d {
            active = unit_plan(h, &active).2.iter().map(|b| b.survivor).collect();
        }
        active
    }

    /// Position of the readout qubit inside the final register.
    pub fn readout_position(&self) -> usize {
        self.hyperparams.final_width() / 2
    }

    fn check_state(&self, state: &StateVector) -> Result<()> {
        if state.num_qubits() != self.hyperparams.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.hyperparams.num_qubits, got: state.num_qubits() });
        }
        Ok(())
    }

    fn reduced(&self, gates: &[UnitaryGate], state: &StateVector) -> Result<CMat> {
        let mut psi = state.clone();
        for g in gates {
            psi.apply(g)?;
        }
        psi.reduced_density(&self.final_register())
    }

    /// QCNN output: probability of Z = +1 on the readout qubit, with every
    /// measurement deferred.
    pub fn classify(&self, state: &StateVector) -> Result<f64> {
        self.check_state(state)?;
        let c = self.compile(&self.params)?;
        let rho = self.reduced(&c.unit_gates, state)?;
        Ok(readout_probability(&c.f, &rho, self.readout_position()))
    }

    /// `(1/2M) Σ (y − f)²`.
    pub fn mse(&self, data: &[(StateVector, f64)]) -> Result<f64> {
        self.mse_at(&self.params, data)
    }

    pub fn mse_at(&self, params: &[f64], data: &[(StateVector, f64)]) -> Result<f64> {
        if data.is_empty() {
            return Err(Error::InvalidArgument("dataset is empty".into()));
        }
        let c = self.compile(params)?;
        let rhos = data.iter().map(|(s, _)| self.reduced(&c.unit_gates, s)).collect::<Result<Vec<_>>>()?;
        Ok(loss_from(&c.f, &rhos, data, self.readout_position()))
    }

    /// Central-difference gradient of the MSE. Unit parameters re-simulate
    /// every sample; `F` parameters reuse the reduced states of the current
    /// point. Both give the same numbers as perturbing the full evaluation.
    pub fn mse_gradient(&self, params: &[f64], data: &[(StateVector, f64)], eps: f64) -> Result<Vec<f64>> {
        if data.is_empty() {
            return Err(Error::InvalidArgument("dataset is empty".into()));
        }
        for (s, _) in data {
            self.check_state(s)?;
        }
        let layout = self.hyperparams.layout();
        let f_seg = layout.last().expect("layout ends with F").clone();
        let pos = self.readout_position();
        let base = self.compile(params)?;
        let unit_part: Vec<Result<f64>> = (0..f_seg.offset)
            .into_par_iter()
            .map(|mu| {
                let at = |delta: f64| -> Result<f64> {
                    let mut p = params.to_vec();
                    p[mu] += delta;
                    let gates = self.compile_units(&p)?;
                    let rhos = data.iter().map(|(s, _)| self.reduced(&gates, s)).collect::<Result<Vec<_>>>()?;
                    Ok(loss_from(&base.f, &rhos, data, pos))
                };
                Ok((at(eps)? - at(-eps)?) / (2.0 * eps))
            })
            .collect();
        let rhos = data.iter().map(|(s, _)| self.reduced(&base.unit_gates, s)).collect::<Result<Vec<_>>>()?;
        let f_part: Vec<Result<f64>> = (f_seg.offset..f_seg.offset + f_seg.len)
            .into_par_iter()
            .map(|mu| {
                let at = |delta: f64| -> Result<f64> {
                    let mut p = params.to_vec();
                    p[mu] += delta;
                    let f = self.segment_unitary(&p, &f_seg)?;
                    Ok(loss_from(&f, &rhos, data, pos))
                };
                Ok((at(eps)? - at(-eps)?) / (2.0 * eps))
            })
            .collect();
        unit_part.into_iter().chain(f_part).collect()
    }

    /// The same circuit as a program with explicit measurements, for dumps
    /// and trajectory runs.
    pub fn to_description(&self) -> Result<CircuitDescription> {
        let h = &self.hyperparams;
        let c = self.compile(&self.params)?;
        let mut elements = Vec::new();
        let mut active: Vec<usize> = (0..h.num_qubits).collect();
        let mut gates = c.unit_gates.into_iter();
        let pairs = h.c1_pairs();
        let mut num_meas = 0;
        for depth in 1..=h.d {
            elements.push(Element::Marker(Marker::Unit { depth, active: active.clone() }));
            let (c1, cj, pools) = unit_plan(h, &active);
            let conv: usize = c1.iter().map(|w| pairs.iter().filter(|&&(x, y)| x < w.len() && y < w.len()).count()).sum::<usize>()
                + cj.iter().map(|b| b.len()).sum::<usize>();
            for g in gates.by_ref().take(conv) {
                elements.push(Element::Gate { kind: GateKind::Trainable, gate: g });
            }
            let mut ids = Vec::new();
            for blk in &pools {
                for &m in &blk.measured {
                    elements.push(Element::Measure { qubit: m, basis: Basis::Z });
                    ids.push(num_meas);
                    num_meas += 1;
                }
            }
            let mut id = ids.into_iter();
            for blk in &pools {
                for _ in &blk.measured {
                    let g = gates.next().expect("one pooling gate per measured qubit");
                    // controlled_gate put the control first; keep only the target part
                    let v = pooling_target(&g);
                    elements.push(Element::Conditional {
                        kind: GateKind::Trainable,
                        conditions: vec![(id.next().expect("id per measured qubit"), -1)],
                        gate: v,
                    });
                }
            }
            active = pools.iter().map(|b| b.survivor).collect();
        }
        elements.push(Element::Marker(Marker::Final { active: active.clone() }));
        elements.push(Element::Gate { kind: GateKind::Final, gate: UnitaryGate { targets: active.clone(), matrix: c.f } });
        let circuit = CircuitDescription {
            num_qubits: h.num_qubits,
            elements,
            readout: Readout { qubit: active[self.readout_position()], basis: Basis::Z },
        };
        circuit.validate()?;
        Ok(circuit)
    }
}

/// The 2×2 block of a Z-controlled single-qubit gate acting when the control is |1⟩.
fn pooling_target(g: &UnitaryGate) -> UnitaryGate {
    let m = &g.matrix;
    // control is bit 0, target bit 1: the |1⟩ block sits at indices 1 and 3
    let v = CMat::from_row_slice(2, 2, &[m[(1, 1)], m[(1, 3)], m[(3, 1)], m[(3, 3)]]);
    UnitaryGate { targets: vec![g.targets[1]], matrix: v }
}

/// `Σ_r (F ρ F†)_{rr}` over basis states with the readout bit 0.
pub(crate) fn readout_probability(f: &CMat, rho: &CMat, pos: usize) -> f64 {
    let dim = f.nrows();
    let mut p = 0.0;
    for r in (0..dim).filter(|r| (r >> pos) & 1 == 0) {
        let row = f.row(r);
        let g = row * rho; // 1×dim
        let v: C64 = g.iter().zip(row.iter()).map(|(a, b)| a * b.conj()).sum();
        p += v.re;
    }
    p.clamp(0.0, 1.0)
}

fn loss_from(f: &CMat, rhos: &[CMat], data: &[(StateVector, f64)], pos: usize) -> f64 {
    let s: f64 = rhos.iter().zip(data).map(|(rho, (_, y))| (y - readout_probability(f, rho, pos)).powi(2)).sum();
    s / (2.0 * data.len() as f64)
}
