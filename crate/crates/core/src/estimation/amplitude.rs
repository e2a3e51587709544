//! Amplitude estimation: phase estimation on the Grover operator
//! `Q = (2|Ψ⟩⟨Ψ| − I) S_χ` with `Ψ = A|0⟩`.
//!
//! The circuit uses a `t`-qubit phase register (qubits `0..t`) followed by
//! the work register of the preparation `A`. Phase qubit `k` controls
//! `Q^{2^{t−1−k}}`, so the register holds `Σ_y |y⟩ Q^y Ψ` before the inverse
//! Fourier transform. Measuring `y` gives `ã = sin²(πy/2^t)`.
//!
//! The circuit is deterministic up to the final measurement, so an
//! [`AmplitudeEstimator`] simulates it once and draws every run from the
//! cached outcome distribution.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::circuit::{apply_circuit, tally_cost, Circuit, CostReport};
use crate::error::{Error, Result};
use crate::gate::{apply_gate_to_amplitudes, Compound, GateOp, MatrixAction, UnitaryAction};
use crate::oracle::{build_bit_query, build_boolean_query, build_rotation_query, build_value_rotation};
use crate::oracle::{BooleanOracle, SequenceOracle};
use crate::state::{qubit_mask, stream_rng, Sampler, StateVector, MAX_QUBITS};

use super::grover::{reflect_zero, reflect_zero_cost};
use super::qft::inverse_qft;

/// How good states are recognized.
#[derive(Clone, Debug)]
pub enum Marking {
    /// Good states have this work qubit set to 1.
    GoodQubit(usize),
    /// A gate on the work register that multiplies good states by −1 and
    /// leaves the prepared bad component unchanged.
    PhaseOracle(GateOp),
}

impl Marking {
    fn as_gate(&self) -> GateOp {
        match self {
            Marking::GoodQubit(q) => GateOp::phase(*q, PI),
            Marking::PhaseOracle(op) => op.clone(),
        }
    }
}

/// A preparation circuit on the work register plus a marking.
#[derive(Clone, Debug)]
pub struct AmplitudeProblem {
    preparation: Circuit,
    marking: Marking,
}

impl AmplitudeProblem {
    pub fn new(preparation: Circuit, marking: Marking) -> Result<Self> {
        let w = preparation.num_qubits();
        match &marking {
            Marking::GoodQubit(q) if *q >= w => return Err(Error::QubitOutOfRange { qubit: *q, num_qubits: w }),
            Marking::PhaseOracle(op) => op.validate(w)?,
            _ => {}
        }
        Ok(AmplitudeProblem { preparation, marking })
    }

    /// Fraction of ones in a Boolean sequence: uniform index superposition,
    /// ancilla in `(|0⟩ − |1⟩)/√2`, marking by the xor query.
    pub fn boolean(oracle: &BooleanOracle) -> Result<Self> {
        let m1 = oracle.index_bits();
        let mut prep = Circuit::new(m1 + 1)?;
        for q in 0..m1 {
            prep.push(GateOp::w(q))?;
        }
        prep.push(GateOp::w(m1))?.push(GateOp::phase(m1, PI))?;
        AmplitudeProblem::new(prep, Marking::PhaseOracle(build_boolean_query(oracle)))
    }

    /// Mean of the decoded fractions `g(i)`, loaded by the rotation oracle.
    pub fn rotation(oracle: &SequenceOracle) -> Result<Self> {
        let m1 = oracle.index_bits();
        let mut prep = Circuit::new(m1 + 1)?;
        for q in 0..m1 {
            prep.push(GateOp::w(q))?;
        }
        prep.push(build_rotation_query(oracle))?;
        AmplitudeProblem::new(prep, Marking::GoodQubit(m1))
    }

    /// Same target as [`AmplitudeProblem::rotation`], but through the
    /// bit-encoded query and a value-controlled rotation on an ancilla.
    pub fn bit_encoded(oracle: &SequenceOracle) -> Result<Self> {
        let m1 = oracle.index_bits();
        let m2 = oracle.value_bits() as usize;
        let mut prep = Circuit::new(m1 + m2 + 1)?;
        for q in 0..m1 {
            prep.push(GateOp::w(q))?;
        }
        prep.push(build_bit_query(oracle))?;
        prep.push(build_value_rotation(oracle.value_bits())?.shifted(m1))?;
        AmplitudeProblem::new(prep, Marking::GoodQubit(m1 + m2))
    }

    /// One qubit prepared as `√(1−a)|0⟩ + √a|1⟩` by a single query.
    pub fn from_probability(a: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::ValueOutOfRange { value: a, lo: 0.0, hi: 1.0 });
        }
        let (c, s) = ((1.0 - a).sqrt(), a.sqrt());
        let m = vec![
            Complex64::new(c, 0.0),
            Complex64::new(-s, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(c, 0.0),
        ];
        let action = Arc::new(MatrixAction::new(1, m)?);
        let prep = Circuit::from_ops(1, vec![GateOp::Compound(Compound::new("A", vec![0], action).with_queries(1))])?;
        AmplitudeProblem::new(prep, Marking::GoodQubit(0))
    }

    pub fn work_qubits(&self) -> usize {
        self.preparation.num_qubits()
    }

    pub fn preparation(&self) -> &Circuit {
        &self.preparation
    }

    pub fn marking(&self) -> &Marking {
        &self.marking
    }

    pub fn prepared_state(&self) -> Result<StateVector> {
        let mut s = StateVector::classical(self.work_qubits(), 0)?;
        apply_circuit(&mut s, &self.preparation)?;
        Ok(s)
    }

    /// The amplitude `a` that the estimator targets, computed exactly as
    /// `(1 − Re⟨Ψ|S_χ|Ψ⟩)/2`.
    pub fn success_probability(&self) -> Result<f64> {
        let psi = self.prepared_state()?;
        let mut marked = psi.clone();
        apply_gate_to_amplitudes(marked.amplitudes_mut(), &self.marking.as_gate())?;
        let overlap: Complex64 = psi.amplitudes().iter().zip(marked.amplitudes()).map(|(a, b)| a.conj() * b).sum();
        Ok(((1.0 - overlap.re) / 2.0).clamp(0.0, 1.0))
    }

    /// Oracle calls in one application of `Q`.
    pub fn iterate_queries(&self) -> u64 {
        self.marking.as_gate().queries() + 2 * self.preparation.query_count()
    }

    /// Elementary gates charged for one application of `Q`.
    pub fn iterate_gate_cost(&self) -> u64 {
        let prep = tally_cost(&self.preparation).num_elementary_gates;
        self.marking.as_gate().gate_cost() + 2 * prep + reflect_zero_cost(self.work_qubits())
    }

    /// `Q` as an action on the work register, `power` times.
    pub fn grover_iterate(&self, power: u64) -> Result<GroverIterate> {
        let psi = self.prepared_state()?.into_amplitudes();
        let w = self.work_qubits();
        let kernel = match &self.marking {
            Marking::GoodQubit(q) => MarkingKernel::Mask(qubit_mask(*q, w)),
            Marking::PhaseOracle(op) => MarkingKernel::Gate(op.clone(), op.inverse()),
        };
        Ok(GroverIterate { psi: Arc::new(psi), kernel, power, adjoint: false })
    }

    /// `Q = S_χ`, then `A†`, `2|0⟩⟨0| − I`, `A`, spelled out gate by gate.
    pub fn grover_iterate_circuit(&self) -> Result<Circuit> {
        let w = self.work_qubits();
        let mut c = Circuit::new(w)?;
        c.push(self.marking.as_gate())?;
        for op in self.preparation.inverse().ops() {
            c.push(op.clone())?;
        }
        c.push(reflect_zero((0..w).collect()))?;
        for op in self.preparation.ops() {
            c.push(op.clone())?;
        }
        Ok(c)
    }
}

#[derive(Clone, Debug)]
enum MarkingKernel {
    Mask(usize),
    Gate(GateOp, GateOp),
}

/// `Q^power` on the work register, applied directly to the local buffer.
#[derive(Clone, Debug)]
pub struct GroverIterate {
    psi: Arc<Vec<Complex64>>,
    kernel: MarkingKernel,
    power: u64,
    adjoint: bool,
}

impl GroverIterate {
    fn mark(&self, local: &mut [Complex64], inverse: bool) {
        match &self.kernel {
            MarkingKernel::Mask(mask) => {
                for (i, z) in local.iter_mut().enumerate() {
                    if i & mask != 0 {
                        *z = -*z;
                    }
                }
            }
            MarkingKernel::Gate(op, inv) => {
                let g = if inverse { inv } else { op };
                apply_gate_to_amplitudes(local, g).expect("marking validated at construction");
            }
        }
    }

    fn reflect(&self, local: &mut [Complex64]) {
        let overlap: Complex64 = self.psi.iter().zip(local.iter()).map(|(p, v)| p.conj() * v).sum();
        let two = 2.0 * overlap;
        for (v, p) in local.iter_mut().zip(self.psi.iter()) {
            *v = two * p - *v;
        }
    }
}

impl UnitaryAction for GroverIterate {
    fn width(&self) -> usize {
        self.psi.len().trailing_zeros() as usize
    }

    fn apply(&self, local: &mut [Complex64]) {
        for _ in 0..self.power {
            if self.adjoint {
                self.reflect(local);
                self.mark(local, true);
            } else {
                self.mark(local, false);
                self.reflect(local);
            }
        }
    }

    fn inverse(&self) -> Arc<dyn UnitaryAction> {
        Arc::new(GroverIterate { adjoint: !self.adjoint, ..self.clone() })
    }
}

/// The full estimation circuit on `t + w` qubits.
pub fn amplitude_estimation_circuit(problem: &AmplitudeProblem, t: usize) -> Result<Circuit> {
    if t == 0 {
        return Err(Error::invalid("phase register needs at least one qubit"));
    }
    let w = problem.work_qubits();
    if t + w > MAX_QUBITS {
        return Err(Error::TooManyQubits { num_qubits: t + w, max: MAX_QUBITS });
    }
    let mut c = Circuit::new(t + w)?;
    for q in 0..t {
        c.push(GateOp::w(q))?;
    }
    c.append_shifted(problem.preparation(), t)?;
    let (q_queries, q_cost) = (problem.iterate_queries(), problem.iterate_gate_cost());
    for k in 0..t {
        let power = 1u64 << (t - 1 - k);
        let action = Arc::new(problem.grover_iterate(power)?);
        let gate = Compound::new(format!("Q^{power}"), (t..t + w).collect(), action)
            .with_controls(vec![k])
            .with_queries(power * q_queries)
            .with_cost(power * q_cost);
        c.push(GateOp::Compound(gate))?;
    }
    c.push(inverse_qft((0..t).collect()))?;
    Ok(c)
}

/// `sin²(πy/2^t)`.
pub fn estimate_from_outcome(y: usize, t: usize) -> f64 {
    (PI * y as f64 / (1u64 << t) as f64).sin().powi(2)
}

/// `2π√(a(1−a))/2^t + π²/4^t`, the single-run error bound that holds with
/// probability at least `8/π²`.
pub fn estimation_error_bound(a: f64, t: usize) -> f64 {
    let m = (1u64 << t) as f64;
    2.0 * PI * (a * (1.0 - a)).max(0.0).sqrt() / m + PI * PI / (m * m)
}

/// Simulated estimation circuit with its cached outcome distribution.
#[derive(Clone, Debug)]
pub struct AmplitudeEstimator {
    phase_bits: usize,
    distribution: Vec<f64>,
    sampler: Sampler,
    cost: CostReport,
}

impl AmplitudeEstimator {
    pub fn new(problem: &AmplitudeProblem, phase_bits: usize) -> Result<Self> {
        let circuit = amplitude_estimation_circuit(problem, phase_bits)?;
        let mut state = StateVector::classical(circuit.num_qubits(), 0)?;
        apply_circuit(&mut state, &circuit)?;
        // the phase register leads, so its marginal sums contiguous blocks
        let block = 1usize << problem.work_qubits();
        let distribution: Vec<f64> =
            state.amplitudes().chunks_exact(block).map(|c| c.iter().map(|z| z.norm_sqr()).sum()).collect();
        let sampler = Sampler::new(&distribution)?;
        Ok(AmplitudeEstimator { phase_bits, distribution, sampler, cost: tally_cost(&circuit) })
    }

    pub fn phase_bits(&self) -> usize {
        self.phase_bits
    }

    /// Probability of each phase-register outcome `y`.
    pub fn distribution(&self) -> &[f64] {
        &self.distribution
    }

    /// Probability that a single run lands within `eps` of `a`.
    pub fn probability_within(&self, a: f64, eps: f64) -> f64 {
        self.distribution
            .iter()
            .enumerate()
            .filter(|(y, _)| (estimate_from_outcome(*y, self.phase_bits) - a).abs() <= eps)
            .map(|(_, p)| p)
            .sum()
    }

    /// Cost of one run.
    pub fn cost(&self) -> CostReport {
        self.cost
    }

    pub fn sample_outcome<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.sampler.sample(rng)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        estimate_from_outcome(self.sample_outcome(rng), self.phase_bits)
    }

    /// Independent runs, run `r` drawing from stream `r` of `seed`.
    pub fn runs(&self, repetitions: usize, seed: u64) -> Vec<f64> {
        (0..repetitions).map(|r| self.sample(&mut stream_rng(seed, r as u64))).collect()
    }
}

/// One run of amplitude estimation.
pub fn amplitude_estimate<R: Rng + ?Sized>(problem: &AmplitudeProblem, phase_bits: usize, rng: &mut R) -> Result<f64> {
    Ok(AmplitudeEstimator::new(problem, phase_bits)?.sample(rng))
}
