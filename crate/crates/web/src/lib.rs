//! Browser bindings for three small demos: Grover success probability per
//! iteration, the amplitude-estimation outcome distribution, and a quantum
//! random number histogram.
//!
//! The computations live in [`demo`] and return plain vectors, so they can be
//! tested natively; the exported wrappers only convert errors for JavaScript.

use wasm_bindgen::prelude::*;

pub mod demo {
    use qmcsim::estimation::amplitude::{AmplitudeEstimator, AmplitudeProblem};
    use qmcsim::estimation::grover::{grover_index_distribution, grover_iterations};
    use qmcsim::experiment::run_qrng;
    use qmcsim::oracle::BooleanOracle;
    use qmcsim::{Error, Result};

    /// Largest register the page may ask for; keeps each call well under a second.
    pub const MAX_DEMO_QUBITS: usize = 12;

    fn check_bits(bits: usize, what: &str) -> Result<()> {
        if bits == 0 || bits > MAX_DEMO_QUBITS {
            return Err(Error::Config(format!("{what} must be between 1 and {MAX_DEMO_QUBITS}")));
        }
        Ok(())
    }

    /// Probability of measuring the marked index after `0, 1, …, 2k+1`
    /// iterations, where `k` is the optimal count.
    pub fn grover_curve(index_bits: usize, marked: usize) -> Result<Vec<f64>> {
        check_bits(index_bits, "index bits")?;
        let len = 1usize << index_bits;
        let marked = marked % len;
        let oracle = BooleanOracle::unique(len, marked)?;
        (0..=2 * grover_iterations(len) + 1).map(|k| Ok(grover_index_distribution(&oracle, k)?[marked])).collect()
    }

    /// Outcome probabilities of the phase register for success probability `a`.
    pub fn ae_distribution(a: f64, phase_bits: usize) -> Result<Vec<f64>> {
        check_bits(phase_bits, "phase bits")?;
        let problem = AmplitudeProblem::from_probability(a)?;
        Ok(AmplitudeEstimator::new(&problem, phase_bits)?.distribution().to_vec())
    }

    /// Outcome counts of `samples` measurements of `W^{⊗m}|0⟩`, followed by
    /// the chi-square p-value against uniform as the last entry.
    pub fn qrng_histogram(qubits: usize, samples: usize, seed: u64) -> Result<Vec<f64>> {
        check_bits(qubits, "qubits")?;
        let report = run_qrng(qubits, samples, seed)?;
        let mut out: Vec<f64> = report.counts.iter().map(|&c| c as f64).collect();
        out.push(report.p_value);
        Ok(out)
    }
}

fn js<T>(r: qmcsim::Result<T>) -> Result<T, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn grover_curve(index_bits: usize, marked: usize) -> Result<Vec<f64>, JsError> {
    js(demo::grover_curve(index_bits, marked))
}

#[wasm_bindgen]
pub fn optimal_iterations(index_bits: usize) -> usize {
    qmcsim::estimation::grover::grover_iterations(1usize << index_bits.min(demo::MAX_DEMO_QUBITS))
}

#[wasm_bindgen]
pub fn ae_distribution(a: f64, phase_bits: usize) -> Result<Vec<f64>, JsError> {
    js(demo::ae_distribution(a, phase_bits))
}

/// The estimate `sin²(πy/2^t)` read off outcome `y`.
#[wasm_bindgen]
pub fn ae_estimate(outcome: usize, phase_bits: usize) -> f64 {
    qmcsim::estimation::amplitude::estimate_from_outcome(outcome, phase_bits)
}

/// `seed` is 32-bit so the page can pass an ordinary number.
#[wasm_bindgen]
pub fn qrng_histogram(qubits: usize, samples: usize, seed: u32) -> Result<Vec<f64>, JsError> {
    js(demo::qrng_histogram(qubits, samples, u64::from(seed)))
}
