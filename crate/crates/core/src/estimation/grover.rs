//! Grover search for a unique marked index.
//!
//! Layout: index register on qubits `0..m₁`, kickback ancilla on qubit `m₁`.

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::circuit::{apply_circuit, Circuit};
use crate::error::{Error, Result};
use crate::gate::{Compound, GateOp, UnitaryAction};
use crate::oracle::{build_boolean_query, BooleanOracle};
use crate::state::StateVector;

/// `2|0⟩⟨0| − I` on a register.
#[derive(Clone, Debug)]
pub struct ReflectZero {
    width: usize,
}

impl UnitaryAction for ReflectZero {
    fn width(&self) -> usize {
        self.width
    }

    fn apply(&self, local: &mut [Complex64]) {
        for z in &mut local[1..] {
            *z = -*z;
        }
    }

    fn inverse(&self) -> Arc<dyn UnitaryAction> {
        Arc::new(self.clone())
    }
}

/// Declared elementary cost of `2|0⟩⟨0| − I` on `w` qubits: X conjugation
/// (`X = W P_π W`) around a multi-controlled Z built from `2w − 3` Toffolis.
pub fn reflect_zero_cost(w: usize) -> u64 {
    let w = w as u64;
    if w <= 1 {
        w
    } else {
        6 * w + 15 * (2 * w - 3)
    }
}

pub fn reflect_zero(qubits: Vec<usize>) -> GateOp {
    let w = qubits.len();
    GateOp::Compound(Compound::new("2|0⟩⟨0|−I", qubits, Arc::new(ReflectZero { width: w })).with_cost(reflect_zero_cost(w)))
}

/// `⌊(π/4)√N⌋`.
pub fn grover_iterations(len: usize) -> usize {
    (FRAC_PI_4 * (len as f64).sqrt()).floor() as usize
}

/// `sin²((2k+1) arcsin(1/√N))`, the success probability after `k` iterations.
pub fn grover_success_formula(len: usize, iterations: usize) -> f64 {
    let theta = (1.0 / (len as f64).sqrt()).asin();
    ((2 * iterations + 1) as f64 * theta).sin().powi(2)
}

/// Circuit with an explicit iteration count.
pub fn grover_circuit_with(oracle: &BooleanOracle, iterations: usize) -> Result<Circuit> {
    let m1 = oracle.index_bits();
    if m1 == 0 {
        return Err(Error::invalid("search needs N ≥ 2"));
    }
    let mut c = Circuit::new(m1 + 1)?;
    for q in 0..m1 {
        c.push(GateOp::w(q))?;
    }
    // W then P_π takes the ancilla from |0⟩ to (|0⟩ − |1⟩)/√2
    c.push(GateOp::w(m1))?.push(GateOp::phase(m1, PI))?;
    let query = build_boolean_query(oracle);
    for _ in 0..iterations {
        c.push(query.clone())?;
        for q in 0..m1 {
            c.push(GateOp::w(q))?;
        }
        c.push(reflect_zero((0..m1).collect()))?;
        for q in 0..m1 {
            c.push(GateOp::w(q))?;
        }
    }
    Ok(c)
}

/// Full search circuit with `⌊(π/4)√N⌋` iterations.
pub fn grover_circuit(oracle: &BooleanOracle) -> Result<Circuit> {
    grover_circuit_with(oracle, grover_iterations(oracle.len()))
}

/// Final state of the search circuit.
pub fn grover_state(oracle: &BooleanOracle, iterations: usize) -> Result<StateVector> {
    let c = grover_circuit_with(oracle, iterations)?;
    let mut s = StateVector::classical(c.num_qubits(), 0)?;
    apply_circuit(&mut s, &c)?;
    Ok(s)
}

/// Probability of measuring each index after `iterations` steps.
pub fn grover_index_distribution(oracle: &BooleanOracle, iterations: usize) -> Result<Vec<f64>> {
    let s = grover_state(oracle, iterations)?;
    s.marginal_probabilities(&(0..oracle.index_bits()).collect::<Vec<_>>())
}

/// Runs the search and returns the measured index.
///
/// With the unique-marked promise the result is the marked index with
/// probability at least 3/4 for N ≥ 4. Without the promise the output is
/// meaningless; this is not detected.
pub fn grover_search<R: Rng + ?Sized>(oracle: &BooleanOracle, rng: &mut R) -> Result<usize> {
    let s = grover_state(oracle, grover_iterations(oracle.len()))?;
    Ok(s.measure(rng)? >> 1)
}
