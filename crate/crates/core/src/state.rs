//! Statevectors of m-qubit registers and measurement.
//!
//! Basis states are indexed as `i = (i_0 i_1 ... i_{m-1})_2` with qubit 0 the
//! most significant bit. Every oracle encoding in this crate relies on that
//! ordering.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest register the simulator will allocate by default.
pub const MAX_QUBITS: usize = 26;

/// Tolerance on `Σ|α_i|² = 1` checked before measuring.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Seeded random stream used for every measurement in the crate.
pub type SimRng = ChaCha8Rng;

/// Deterministic random stream `stream` derived from `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Bit mask selecting `qubit` in a basis index of a `num_qubits` register.
#[inline]
pub fn qubit_mask(qubit: usize, num_qubits: usize) -> usize {
    1 << (num_qubits - 1 - qubit)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The classical state `|index⟩` of an `num_qubits` register.
    pub fn classical(num_qubits: usize, index: usize) -> Result<Self> {
        check_register(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::BasisIndexOutOfRange { index, num_qubits });
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(StateVector { num_qubits, amplitudes })
    }

    /// Builds a state from explicit amplitudes, checking length and norm.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let state = Self::from_amplitudes_unchecked(amplitudes)?;
        state.check_normalized()?;
        Ok(state)
    }

    /// Like [`StateVector::from_amplitudes`] but without the norm check.
    ///
    /// The length must still be a power of two.
    pub fn from_amplitudes_unchecked(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::invalid(format!(
                "amplitude vector length {len} is not a power of two >= 2"
            )));
        }
        let num_qubits = len.trailing_zeros() as usize;
        check_register(num_qubits)?;
        Ok(StateVector { num_qubits, amplitudes })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn check_normalized(&self) -> Result<()> {
        let norm = self.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm, tolerance: NORM_TOLERANCE });
        }
        Ok(())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Outcome distribution of measuring only `qubits` (listed most significant
    /// first) while ignoring the rest of the register.
    pub fn marginal_probabilities(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        for &q in qubits {
            self.check_qubit(q)?;
        }
        let masks: Vec<usize> = qubits.iter().map(|&q| qubit_mask(q, self.num_qubits)).collect();
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let mut outcome = 0usize;
            for &m in &masks {
                outcome = (outcome << 1) | usize::from(i & m != 0);
            }
            probs[outcome] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Largest componentwise distance to another state of the same size.
    pub fn max_distance(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Samples a basis index with probability `|α_i|²`.
    pub fn measure<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<usize> {
        self.check_normalized()?;
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            acc += a.norm_sqr();
            if u < acc {
                return Ok(i);
            }
        }
        Ok(last_nonzero(&self.probabilities()))
    }

    pub(crate) fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitOutOfRange { qubit, num_qubits: self.num_qubits });
        }
        Ok(())
    }
}

/// Starting state `|i⟩` of the quantum model of computation.
pub fn init_classical(num_qubits: usize, index: usize) -> Result<StateVector> {
    StateVector::classical(num_qubits, index)
}

pub(crate) fn check_register(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 {
        return Err(Error::invalid("a register needs at least one qubit"));
    }
    if num_qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits { num_qubits, max: MAX_QUBITS });
    }
    Ok(())
}

fn last_nonzero(probs: &[f64]) -> usize {
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// Inverse-CDF sampler over a fixed outcome distribution.
///
/// Repeated measurements of the same pre-measurement state share one
/// cumulative table.
#[derive(Clone, Debug)]
pub struct Sampler {
    cumulative: Vec<f64>,
}

impl Sampler {
    pub fn new(probabilities: &[f64]) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::invalid("empty distribution"));
        }
        let mut acc = 0.0;
        let cumulative: Vec<f64> = probabilities
            .iter()
            .map(|&p| {
                acc += p;
                acc
            })
            .collect();
        if (acc - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm: acc, tolerance: NORM_TOLERANCE });
        }
        Ok(Sampler { cumulative })
    }

    pub fn from_state(state: &StateVector) -> Result<Self> {
        Self::new(&state.probabilities())
    }

    pub fn len(&self) -> usize {
        self.cumulative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cumulative.is_empty()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random::<f64>() * self.cumulative[self.cumulative.len() - 1];
        let idx = self.cumulative.partition_point(|&c| c <= u);
        if idx < self.cumulative.len() {
            idx
        } else {
            // u landed in floating-point slack above the last positive weight
            let probs: Vec<f64> = std::iter::once(self.cumulative[0])
                .chain(self.cumulative.windows(2).map(|w| w[1] - w[0]))
                .collect();
            last_nonzero(&probs)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_states() {
        let s = init_classical(1, 0).unwrap();
        assert_eq!(s.amplitudes(), &[ONE, ZERO]);
        let s = init_classical(2, 3).unwrap();
        assert_eq!(s.amplitudes(), &[ZERO, ZERO, ZERO, ONE]);
        assert!(matches!(
            init_classical(2, 4),
            Err(Error::BasisIndexOutOfRange { index: 4, num_qubits: 2 })
        ));
        assert!(matches!(init_classical(MAX_QUBITS + 1, 0), Err(Error::TooManyQubits { .. })));
    }

    #[test]
    fn measure_classical_is_certain() {
        let s = init_classical(3, 5).unwrap();
        for seed in 0..20 {
            let mut rng = stream_rng(seed, 0);
            assert_eq!(s.measure(&mut rng).unwrap(), 5);
        }
    }

    #[test]
    fn measure_rejects_unnormalized() {
        let s = StateVector::from_amplitudes_unchecked(vec![ONE, ONE]).unwrap();
        let mut rng = stream_rng(1, 0);
        assert!(matches!(s.measure(&mut rng), Err(Error::NotNormalized { .. })));
        assert!(StateVector::from_amplitudes(vec![ONE, ONE]).is_err());
    }

    #[test]
    fn bernoulli_frequency() {
        let s = StateVector::from_amplitudes(vec![
            Complex64::new(0.36f64.sqrt(), 0.0),
            Complex64::new(0.64f64.sqrt(), 0.0),
        ])
        .unwrap();
        let mut rng = stream_rng(42, 0);
        let draws = 100_000;
        let ones = (0..draws).filter(|_| s.measure(&mut rng).unwrap() == 1).count();
        let freq = ones as f64 / draws as f64;
        assert!((freq - 0.64).abs() < 0.01, "frequency {freq}");
    }

    #[test]
    fn sampler_matches_measure_law() {
        let sampler = Sampler::new(&[0.0, 0.25, 0.0, 0.75]).unwrap();
        let mut rng = stream_rng(3, 0);
        let mut counts = [0usize; 4];
        for _ in 0..40_000 {
            counts[sampler.sample(&mut rng)] += 1;
        }
        assert_eq!(counts[0], 0);
        assert_eq!(counts[2], 0);
        assert!((counts[3] as f64 / 40_000.0 - 0.75).abs() < 0.01);
    }

    #[test]
    fn same_seed_same_sequence() {
        let s = StateVector::from_amplitudes(vec![Complex64::new(0.5, 0.0); 4]).unwrap();
        let run = |seed| {
            let mut rng = stream_rng(seed, 7);
            (0..50).map(|_| s.measure(&mut rng).unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(run(9), run(9));
        assert_ne!(run(9), run(10));
    }

    #[test]
    fn marginals_follow_qubit_order() {
        // |1⟩|0⟩ on two qubits is index 2
        let s = init_classical(2, 2).unwrap();
        assert_eq!(s.marginal_probabilities(&[0]).unwrap(), vec![0.0, 1.0]);
        assert_eq!(s.marginal_probabilities(&[1]).unwrap(), vec![1.0, 0.0]);
        assert_eq!(s.marginal_probabilities(&[1, 0]).unwrap(), vec![0.0, 1.0, 0.0, 0.0]);
    }
}
