//! The elementary gate set {W, P_θ, X} and compound gates.
//!
//! A compound gate bundles an arbitrary unitary on a few target qubits,
//! optionally conditioned on control qubits, together with the number of
//! oracle queries it represents and a declared elementary-gate cost. Oracles,
//! Fourier transforms and Grover operators are simulated this way without
//! being decomposed.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{qubit_mask, StateVector, ZERO};

/// A unitary acting on a local register of `width()` qubits.
///
/// The local buffer passed to [`UnitaryAction::apply`] has length
/// `2^width()`, indexed with the first target qubit as most significant bit.
pub trait UnitaryAction: fmt::Debug + Send + Sync {
    fn width(&self) -> usize;

    fn apply(&self, local: &mut [Complex64]);

    fn inverse(&self) -> Arc<dyn UnitaryAction>;

    /// For actions that permute basis states without phases, the image of a
    /// local basis index.
    fn classical_image(&self, _local: usize) -> Option<usize> {
        None
    }
}

#[derive(Clone, Debug)]
pub struct Compound {
    pub label: String,
    pub targets: Vec<usize>,
    pub controls: Vec<usize>,
    pub action: Arc<dyn UnitaryAction>,
    /// Oracle calls represented by one application of this gate.
    pub queries: u64,
    /// Elementary gates charged for one application, excluding queries.
    pub declared_cost: u64,
}

impl Compound {
    pub fn new(label: impl Into<String>, targets: Vec<usize>, action: Arc<dyn UnitaryAction>) -> Self {
        Compound {
            label: label.into(),
            targets,
            controls: Vec::new(),
            action,
            queries: 0,
            declared_cost: 0,
        }
    }

    pub fn with_controls(mut self, controls: Vec<usize>) -> Self {
        self.controls = controls;
        self
    }

    pub fn with_queries(mut self, queries: u64) -> Self {
        self.queries = queries;
        self
    }

    pub fn with_cost(mut self, declared_cost: u64) -> Self {
        self.declared_cost = declared_cost;
        self
    }

    pub fn is_query(&self) -> bool {
        self.queries > 0
    }

    fn inverse(&self) -> Compound {
        Compound {
            label: format!("{}^-1", self.label),
            action: self.action.inverse(),
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug)]
pub enum GateOp {
    /// `W` on qubit j.
    WalshHadamard(usize),
    /// `P_θ` on qubit j, θ in [0, 2π).
    PhaseShift(usize, f64),
    /// Quantum xor: flips qubit ℓ when qubit k is set.
    ControlledNot(usize, usize),
    Compound(Compound),
}

impl GateOp {
    pub fn w(qubit: usize) -> Self {
        GateOp::WalshHadamard(qubit)
    }

    /// Phase shift with the angle reduced to [0, 2π).
    pub fn phase(qubit: usize, theta: f64) -> Self {
        GateOp::PhaseShift(qubit, normalize_angle(theta))
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        GateOp::ControlledNot(control, target)
    }

    pub fn compound(c: Compound) -> Self {
        GateOp::Compound(c)
    }

    pub fn is_elementary(&self) -> bool {
        !matches!(self, GateOp::Compound(_))
    }

    pub fn queries(&self) -> u64 {
        match self {
            GateOp::Compound(c) => c.queries,
            _ => 0,
        }
    }

    /// Elementary gates charged to this op: 1 for W, P and X, the declared
    /// cost for a compound.
    pub fn gate_cost(&self) -> u64 {
        match self {
            GateOp::Compound(c) => c.declared_cost,
            _ => 1,
        }
    }

    /// All qubits the op touches.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            GateOp::WalshHadamard(j) | GateOp::PhaseShift(j, _) => vec![*j],
            GateOp::ControlledNot(k, l) => vec![*k, *l],
            GateOp::Compound(c) => c.controls.iter().chain(&c.targets).copied().collect(),
        }
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let qubits = self.qubits();
        for &q in &qubits {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
            }
        }
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(Error::RepeatedQubit(*q));
            }
        }
        if let GateOp::Compound(c) = self {
            if c.action.width() != c.targets.len() {
                return Err(Error::invalid(format!(
                    "compound '{}' acts on {} qubits but lists {} targets",
                    c.label,
                    c.action.width(),
                    c.targets.len()
                )));
            }
        }
        Ok(())
    }

    pub fn inverse(&self) -> GateOp {
        match self {
            GateOp::PhaseShift(j, theta) => GateOp::phase(*j, TAU - theta),
            GateOp::Compound(c) => GateOp::Compound(c.inverse()),
            other => other.clone(),
        }
    }

    /// The same op with every qubit index moved up by `offset`.
    pub fn shifted(&self, offset: usize) -> GateOp {
        match self {
            GateOp::WalshHadamard(j) => GateOp::WalshHadamard(j + offset),
            GateOp::PhaseShift(j, t) => GateOp::PhaseShift(j + offset, *t),
            GateOp::ControlledNot(k, l) => GateOp::ControlledNot(k + offset, l + offset),
            GateOp::Compound(c) => GateOp::Compound(Compound {
                targets: c.targets.iter().map(|q| q + offset).collect(),
                controls: c.controls.iter().map(|q| q + offset).collect(),
                ..c.clone()
            }),
        }
    }

    /// Image of a basis state, if the op maps basis states to basis states
    /// without phases.
    pub fn classical_image(&self, index: usize, num_qubits: usize) -> Option<usize> {
        match self {
            GateOp::ControlledNot(k, l) => {
                let mk = qubit_mask(*k, num_qubits);
                let ml = qubit_mask(*l, num_qubits);
                Some(if index & mk != 0 { index ^ ml } else { index })
            }
            GateOp::Compound(c) => {
                if !c.controls.iter().all(|&q| index & qubit_mask(q, num_qubits) != 0) {
                    return Some(index);
                }
                let masks: Vec<usize> = c.targets.iter().map(|&q| qubit_mask(q, num_qubits)).collect();
                let mut local = 0;
                for &m in &masks {
                    local = (local << 1) | usize::from(index & m != 0);
                }
                let image = c.action.classical_image(local)?;
                let mut out = index;
                for (k, &m) in masks.iter().enumerate() {
                    let bit = (image >> (masks.len() - 1 - k)) & 1;
                    out = if bit == 1 { out | m } else { out & !m };
                }
                Some(out)
            }
            _ => None,
        }
    }
}

pub(crate) fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Applies one gate in place.
pub fn apply_gate(state: &mut StateVector, gate: &GateOp) -> Result<()> {
    apply_gate_to_amplitudes(state.amplitudes_mut(), gate)
}

/// Applies one gate to a raw amplitude buffer of length `2^m`.
pub fn apply_gate_to_amplitudes(amps: &mut [Complex64], gate: &GateOp) -> Result<()> {
    if !amps.len().is_power_of_two() {
        return Err(Error::invalid(format!("buffer length {} is not a power of two", amps.len())));
    }
    let m = amps.len().trailing_zeros() as usize;
    gate.validate(m)?;
    match gate {
        GateOp::WalshHadamard(j) => hadamard_kernel(amps, qubit_mask(*j, m)),
        GateOp::PhaseShift(j, theta) => phase_kernel(amps, qubit_mask(*j, m), *theta),
        GateOp::ControlledNot(k, l) => cnot_kernel(amps, qubit_mask(*k, m), qubit_mask(*l, m)),
        GateOp::Compound(c) => compound_kernel(amps, m, c),
    }
    Ok(())
}

fn hadamard_kernel(amps: &mut [Complex64], mask: usize) {
    for block in amps.chunks_exact_mut(2 * mask) {
        let (lo, hi) = block.split_at_mut(mask);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = (x + y) * FRAC_1_SQRT_2;
            *b = (x - y) * FRAC_1_SQRT_2;
        }
    }
}

fn phase_kernel(amps: &mut [Complex64], mask: usize, theta: f64) {
    let phase = Complex64::from_polar(1.0, theta);
    for block in amps.chunks_exact_mut(2 * mask) {
        for b in &mut block[mask..] {
            *b *= phase;
        }
    }
}

fn cnot_kernel(amps: &mut [Complex64], control: usize, target: usize) {
    for i in 0..amps.len() {
        if i & control != 0 && i & target == 0 {
            amps.swap(i, i | target);
        }
    }
}

fn compound_kernel(amps: &mut [Complex64], num_qubits: usize, c: &Compound) {
    let width = c.targets.len();
    let local_dim = 1usize << width;
    let control_mask: usize = c.controls.iter().map(|&q| qubit_mask(q, num_qubits)).sum();
    let trailing = c.targets.iter().enumerate().all(|(k, &q)| q == num_qubits - width + k);

    if trailing {
        for (block_idx, block) in amps.chunks_exact_mut(local_dim).enumerate() {
            if (block_idx << width) & control_mask == control_mask {
                c.action.apply(block);
            }
        }
        return;
    }

    let masks: Vec<usize> = c.targets.iter().map(|&q| qubit_mask(q, num_qubits)).collect();
    let target_mask: usize = masks.iter().sum();
    let offsets: Vec<usize> = (0..local_dim)
        .map(|l| {
            masks
                .iter()
                .enumerate()
                .filter(|(k, _)| (l >> (width - 1 - k)) & 1 == 1)
                .map(|(_, m)| m)
                .sum()
        })
        .collect();
    let mut local = vec![ZERO; local_dim];
    for base in 0..amps.len() {
        if base & target_mask != 0 || base & control_mask != control_mask {
            continue;
        }
        for (l, off) in offsets.iter().enumerate() {
            local[l] = amps[base + off];
        }
        c.action.apply(&mut local);
        for (l, off) in offsets.iter().enumerate() {
            amps[base + off] = local[l];
        }
    }
}

/// Dense unitary on a small register, stored row-major.
#[derive(Clone, Debug)]
pub struct MatrixAction {
    width: usize,
    matrix: Vec<Complex64>,
}

impl MatrixAction {
    pub fn new(width: usize, matrix: Vec<Complex64>) -> Result<Self> {
        let dim = 1usize << width;
        if matrix.len() != dim * dim {
            return Err(Error::invalid(format!("expected a {dim}x{dim} matrix")));
        }
        let action = MatrixAction { width, matrix };
        let deviation = action.unitarity_deviation();
        if deviation > 1e-10 {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(action)
    }

    fn unitarity_deviation(&self) -> f64 {
        let dim = 1usize << self.width;
        let mut worst: f64 = 0.0;
        for r in 0..dim {
            for s in 0..dim {
                let dot: Complex64 =
                    (0..dim).map(|k| self.matrix[k * dim + r].conj() * self.matrix[k * dim + s]).sum();
                let expected = if r == s { 1.0 } else { 0.0 };
                worst = worst.max((dot - expected).norm());
            }
        }
        worst
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }
}

impl UnitaryAction for MatrixAction {
    fn width(&self) -> usize {
        self.width
    }

    fn apply(&self, local: &mut [Complex64]) {
        let dim = local.len();
        let input = local.to_vec();
        for (r, out) in local.iter_mut().enumerate() {
            *out = self.matrix[r * dim..(r + 1) * dim].iter().zip(&input).map(|(m, x)| m * x).sum();
        }
    }

    fn inverse(&self) -> Arc<dyn UnitaryAction> {
        let dim = 1usize << self.width;
        let mut adj = vec![ZERO; dim * dim];
        for r in 0..dim {
            for s in 0..dim {
                adj[s * dim + r] = self.matrix[r * dim + s].conj();
            }
        }
        Arc::new(MatrixAction { width: self.width, matrix: adj })
    }
}

/// Permutation of local basis states.
#[derive(Clone, Debug)]
pub struct PermutationAction {
    width: usize,
    image: Vec<usize>,
}

impl PermutationAction {
    pub fn new(width: usize, image: Vec<usize>) -> Result<Self> {
        let dim = 1usize << width;
        if image.len() != dim {
            return Err(Error::invalid(format!("permutation needs {dim} entries")));
        }
        let mut seen = vec![false; dim];
        for &j in &image {
            if j >= dim || std::mem::replace(&mut seen[j], true) {
                return Err(Error::invalid("map is not a bijection on basis states"));
            }
        }
        Ok(PermutationAction { width, image })
    }
}

impl UnitaryAction for PermutationAction {
    fn width(&self) -> usize {
        self.width
    }

    fn apply(&self, local: &mut [Complex64]) {
        let input = local.to_vec();
        for (i, &j) in self.image.iter().enumerate() {
            local[j] = input[i];
        }
    }

    fn inverse(&self) -> Arc<dyn UnitaryAction> {
        let mut inv = vec![0; self.image.len()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j] = i;
        }
        Arc::new(PermutationAction { width: self.width, image: inv })
    }

    fn classical_image(&self, local: usize) -> Option<usize> {
        Some(self.image[local])
    }
}

/// Toffoli (doubly controlled not) as a compound with the cost of its
/// standard 15-gate decomposition over {W, P_θ, X}.
pub fn toffoli(a: usize, b: usize, target: usize) -> GateOp {
    // |a b t⟩ -> |a b t⊕ab⟩, local index (a b t)_2
    let image = (0..8).map(|i| if i & 0b110 == 0b110 { i ^ 1 } else { i }).collect();
    let action = PermutationAction::new(3, image).expect("toffoli table is a bijection");
    GateOp::Compound(Compound::new("toffoli", vec![a, b, target], Arc::new(action)).with_cost(15))
}

/// Toffoli written out in the elementary gate set (exact, including phases).
pub fn toffoli_elementary(a: usize, b: usize, c: usize) -> Vec<GateOp> {
    use std::f64::consts::FRAC_PI_4;
    let t = |q| GateOp::phase(q, FRAC_PI_4);
    let tdg = |q| GateOp::phase(q, -FRAC_PI_4);
    vec![
        GateOp::w(c),
        GateOp::cnot(b, c),
        tdg(c),
        GateOp::cnot(a, c),
        t(c),
        GateOp::cnot(b, c),
        tdg(c),
        GateOp::cnot(a, c),
        t(b),
        t(c),
        GateOp::w(c),
        GateOp::cnot(a, b),
        t(a),
        tdg(b),
        GateOp::cnot(a, b),
    ]
}

/// Full matrix (row-major) of an action, obtained column by column.
pub fn action_matrix(action: &dyn UnitaryAction) -> Vec<Complex64> {
    let dim = 1usize << action.width();
    let mut m = vec![ZERO; dim * dim];
    for col in 0..dim {
        let mut v = vec![ZERO; dim];
        v[col] = Complex64::new(1.0, 0.0);
        action.apply(&mut v);
        for (row, x) in v.into_iter().enumerate() {
            m[row * dim + col] = x;
        }
    }
    m
}
