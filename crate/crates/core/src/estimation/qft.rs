//! Quantum Fourier transform as a compound gate backed by an FFT, plus the
//! textbook gate-level circuit used to cross-check it.
//!
//! `QFT|x⟩ = 2^{−t/2} Σ_y e^{2πixy/2^t}|y⟩` on `t` qubits, qubit 0 most significant.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::circuit::Circuit;
use crate::error::Result;
use crate::gate::{Compound, GateOp, UnitaryAction};

#[derive(Clone)]
pub struct FourierAction {
    width: usize,
    inverse: bool,
    fft: Arc<dyn Fft<f64>>,
}

impl FourierAction {
    pub fn new(width: usize, inverse: bool) -> Self {
        let mut planner = FftPlanner::new();
        let len = 1usize << width;
        // the inverse QFT carries e^{−2πi xy/M}, the FFT library's forward sign
        let fft = if inverse { planner.plan_fft_forward(len) } else { planner.plan_fft_inverse(len) };
        FourierAction { width, inverse, fft }
    }
}

impl fmt::Debug for FourierAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FourierAction").field("width", &self.width).field("inverse", &self.inverse).finish()
    }
}

impl UnitaryAction for FourierAction {
    fn width(&self) -> usize {
        self.width
    }

    fn apply(&self, local: &mut [Complex64]) {
        self.fft.process(local);
        let scale = (local.len() as f64).sqrt().recip();
        for z in local.iter_mut() {
            *z *= scale;
        }
    }

    fn inverse(&self) -> Arc<dyn UnitaryAction> {
        Arc::new(FourierAction::new(self.width, !self.inverse))
    }
}

/// Elementary gates charged for a `t`-qubit Fourier transform.
pub fn fourier_cost(t: usize) -> u64 {
    let t = t as u64;
    t * (t + 1) / 2 + t
}

fn fourier_gate(qubits: Vec<usize>, inverse: bool) -> GateOp {
    let t = qubits.len();
    let label = if inverse { "QFT†" } else { "QFT" };
    GateOp::Compound(
        Compound::new(label, qubits, Arc::new(FourierAction::new(t, inverse))).with_cost(fourier_cost(t)),
    )
}

pub fn qft(qubits: Vec<usize>) -> GateOp {
    fourier_gate(qubits, false)
}

pub fn inverse_qft(qubits: Vec<usize>) -> GateOp {
    fourier_gate(qubits, true)
}

/// Controlled `P_φ` written with two CNOTs and three phase shifts.
pub fn controlled_phase(control: usize, target: usize, phi: f64) -> Vec<GateOp> {
    vec![
        GateOp::phase(control, phi / 2.0),
        GateOp::phase(target, phi / 2.0),
        GateOp::cnot(control, target),
        GateOp::phase(target, -phi / 2.0),
        GateOp::cnot(control, target),
    ]
}

pub fn swap(a: usize, b: usize) -> Vec<GateOp> {
    vec![GateOp::cnot(a, b), GateOp::cnot(b, a), GateOp::cnot(a, b)]
}

/// Gate-level QFT on qubits `0..t` using only W, P_θ and CNOT.
pub fn qft_circuit(t: usize) -> Result<Circuit> {
    let mut ops = Vec::new();
    for j in 0..t {
        ops.push(GateOp::w(j));
        for k in j + 1..t {
            ops.extend(controlled_phase(k, j, 2.0 * PI / (1u64 << (k - j + 1)) as f64));
        }
    }
    for j in 0..t / 2 {
        ops.extend(swap(j, t - 1 - j));
    }
    Circuit::from_ops(t, ops)
}
