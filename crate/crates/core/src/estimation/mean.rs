//! Quantum mean estimation for Boolean and bounded real sequences, boosted
//! by the median of independent repetitions.

use serde::Serialize;

use crate::circuit::CostReport;
use crate::error::{Error, Result};
use crate::oracle::{BooleanOracle, SequenceOracle};

use super::amplitude::{AmplitudeEstimator, AmplitudeProblem};

pub const DEFAULT_REPETITIONS: usize = 11;
pub const DEFAULT_PHASE_BITS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EstimateConfig {
    /// Size `t` of the phase register; the estimator uses `2^t − 1` Grover
    /// applications per run.
    pub phase_bits: usize,
    /// Odd number of runs merged by the median.
    pub repetitions: usize,
    pub seed: u64,
}

impl EstimateConfig {
    pub fn new(phase_bits: usize, repetitions: usize, seed: u64) -> Result<Self> {
        let c = EstimateConfig { phase_bits, repetitions, seed };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.phase_bits == 0 {
            return Err(Error::Config("phase_bits must be at least 1".into()));
        }
        if self.repetitions.is_multiple_of(2) {
            return Err(Error::Config(format!("repetitions must be odd, got {}", self.repetitions)));
        }
        Ok(())
    }
}

impl Default for EstimateConfig {
    fn default() -> Self {
        EstimateConfig { phase_bits: DEFAULT_PHASE_BITS, repetitions: DEFAULT_REPETITIONS, seed: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimateResult {
    /// Median of `trials`.
    pub value: f64,
    /// Oracle calls summed over all repetitions.
    pub queries_used: u64,
    /// Cost summed over all repetitions.
    pub cost: CostReport,
    /// Raw per-repetition estimates.
    pub trials: Vec<f64>,
}

impl EstimateResult {
    pub fn queries_per_repetition(&self) -> u64 {
        self.queries_used / self.trials.len().max(1) as u64
    }

    fn from_runs(trials: Vec<f64>, cost_per_run: CostReport) -> Result<Self> {
        let value = median_boost(&trials)?;
        let cost = cost_per_run.repeated(trials.len() as u64);
        Ok(EstimateResult { value, queries_used: cost.num_queries, cost, trials })
    }

    fn map(mut self, f: impl Fn(f64) -> f64) -> Self {
        self.value = f(self.value);
        self.trials.iter_mut().for_each(|v| *v = f(*v));
        self
    }
}

/// Middle order statistic of an odd number of runs.
pub fn median_boost(runs: &[f64]) -> Result<f64> {
    if runs.len().is_multiple_of(2) {
        return Err(Error::invalid(format!("median boosting needs an odd number of runs, got {}", runs.len())));
    }
    let mut sorted = runs.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted[sorted.len() / 2])
}

/// Median-boosted amplitude estimate from an already simulated estimator.
pub fn boosted_estimate(estimator: &AmplitudeEstimator, repetitions: usize, seed: u64) -> Result<EstimateResult> {
    EstimateResult::from_runs(estimator.runs(repetitions, seed), estimator.cost())
}

pub fn estimate_amplitude(problem: &AmplitudeProblem, config: &EstimateConfig) -> Result<EstimateResult> {
    config.validate()?;
    let estimator = AmplitudeEstimator::new(problem, config.phase_bits)?;
    boosted_estimate(&estimator, config.repetitions, config.seed)
}

/// `(1/N) Σ f(i)` for a Boolean sequence; each run costs `2^t − 1` queries.
pub fn mean_boolean(f: &BooleanOracle, config: &EstimateConfig) -> Result<EstimateResult> {
    estimate_amplitude(&AmplitudeProblem::boolean(f)?, config)
}

/// How a real sequence is loaded into the success amplitude.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LoadingPath {
    /// Per-index rotation oracle on one ancilla.
    #[default]
    Rotation,
    /// Bit-encoded query into an `m₂`-qubit value register, then a
    /// value-controlled rotation. Needs `m₂` extra qubits.
    BitRegister,
}

/// Maps an estimate `ã` of `mean(g)` back to `a + (b − a) ã`.
pub fn decode_mean(f: &SequenceOracle, result: EstimateResult) -> EstimateResult {
    result.map(|g| f.decode(g))
}

pub fn mean_real_with(f: &SequenceOracle, config: &EstimateConfig, path: LoadingPath) -> Result<EstimateResult> {
    let problem = match path {
        LoadingPath::Rotation => AmplitudeProblem::rotation(f)?,
        LoadingPath::BitRegister => AmplitudeProblem::bit_encoded(f)?,
    };
    Ok(decode_mean(f, estimate_amplitude(&problem, config)?))
}

/// Mean of a real sequence in `[a, b]` through the rotation oracle.
pub fn mean_real(f: &SequenceOracle, config: &EstimateConfig) -> Result<EstimateResult> {
    mean_real_with(f, config, LoadingPath::Rotation)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_examples() {
        assert_eq!(median_boost(&[0.5]).unwrap(), 0.5);
        assert_eq!(median_boost(&[0.9, 0.1, 0.5]).unwrap(), 0.5);
        assert!(median_boost(&[0.1, 0.2]).is_err());
        assert!(median_boost(&[]).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(EstimateConfig::new(0, 1, 0).is_err());
        assert!(EstimateConfig::new(3, 4, 0).unwrap_err().is_configuration());
        assert_eq!(EstimateConfig::default().repetitions, 11);
    }

    #[test]
    fn constant_sequences() {
        let cfg = EstimateConfig::new(4, 3, 1).unwrap();
        let zeros = mean_boolean(&BooleanOracle::new(vec![false; 8]).unwrap(), &cfg).unwrap();
        let ones = mean_boolean(&BooleanOracle::new(vec![true; 8]).unwrap(), &cfg).unwrap();
        assert_eq!(zeros.value, 0.0);
        assert!((ones.value - 1.0).abs() < 1e-15);
        assert_eq!(zeros.queries_per_repetition(), 15);
        assert_eq!(zeros.queries_used, 45);
    }

    #[test]
    fn paths_agree_on_small_sequences() {
        let f = SequenceOracle::new(vec![-1.0, 0.5, 0.25, 1.0], -1.0, 1.0, 3).unwrap();
        let cfg = EstimateConfig::new(4, 5, 9).unwrap();
        let a = mean_real_with(&f, &cfg, LoadingPath::Rotation).unwrap();
        let b = mean_real_with(&f, &cfg, LoadingPath::BitRegister).unwrap();
        assert!((a.value - b.value).abs() < 1e-12);
        assert!(a.trials.iter().all(|v| (-1.0..=1.0).contains(v)));
    }
}
