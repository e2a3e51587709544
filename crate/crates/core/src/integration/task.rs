//! Quantum integration by separation of the main part:
//! `∫f = ∫P_n f + ∫(f − P_n f)`, with the first term exact and the second
//! estimated as a quantum mean over a fine midpoint lattice.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::estimation::mean::{mean_real, EstimateConfig, EstimateResult};
use crate::oracle::{SequenceOracle, MAX_VALUE_BITS};
use crate::state::stream_rng;

use super::hoelder::HoelderSpec;
use super::interpolant::{build_interpolant, lebesgue_constant, quadrature_main, Interpolant};

pub type Integrand = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Largest fine grid, in index qubits, that the pipeline will simulate.
pub const MAX_FINE_GRID_BITS: usize = 20;

/// Widening attempts before giving up on a residual range.
const MAX_WIDENINGS: usize = 16;

fn ceil_log2(x: usize) -> usize {
    x.next_power_of_two().trailing_zeros() as usize
}

/// Fine-grid size `N` and residual encoding bits `m₂` for budget `n`.
///
/// `N` is the smallest power of two with `N ≥ n^{1 + d/(r+ρ)}`, so the fine
/// grid's discretization error stays below the target rate, and
/// `m₂ = ⌈log₂ n⌉ + ⌈((r+ρ)/d) log₂ n⌉ + 2`.
pub fn choose_fine_grid(n: usize, spec: &HoelderSpec) -> Result<(usize, u32)> {
    if n == 0 {
        return Err(Error::Config("budget n must be positive".into()));
    }
    let exponent = 1.0 + 1.0 / spec.smoothness_rate();
    let log_target = exponent * (n as f64).log2();
    // snap values within rounding noise of an integer so that 16² gives 2^8
    let snapped = if (log_target - log_target.round()).abs() < 1e-9 { log_target.round() } else { log_target };
    let bits = snapped.ceil().max(0.0) as usize;
    if bits > MAX_FINE_GRID_BITS {
        return Err(Error::Config(format!(
            "fine grid of 2^{bits} points exceeds the simulator budget of 2^{MAX_FINE_GRID_BITS}; use a smaller n"
        )));
    }
    let log_n = (n as f64).log2();
    let rate_bits = (spec.smoothness_rate() * log_n - 1e-9).ceil().max(0.0) as usize;
    let value_bits = (ceil_log2(n) + rate_bits + 2).min(MAX_VALUE_BITS as usize) as u32;
    Ok((1usize << bits, value_bits))
}

/// Points per axis of a `2^bits` lattice in `d` dimensions, earlier axes
/// taking the leftover bits.
pub fn lattice_shape(bits: usize, d: usize) -> Vec<usize> {
    (0..d).map(|axis| 1usize << (bits / d + usize::from(axis < bits % d))).collect()
}

/// Midpoint lattice point with rank `i`, first axis most significant.
pub fn fine_grid_point(i: usize, shape: &[usize]) -> Vec<f64> {
    let mut rem = i;
    let mut x = vec![0.0; shape.len()];
    for axis in (0..shape.len()).rev() {
        let c = rem % shape[axis];
        rem /= shape[axis];
        x[axis] = (c as f64 + 0.5) / shape[axis] as f64;
    }
    x
}

/// `g(i) = f(t_i) − P_n f(t_i)` over the `N`-point midpoint lattice.
pub fn residual_sequence(f: &dyn Fn(&[f64]) -> f64, interp: &Interpolant, fine_grid: usize) -> Result<Vec<f64>> {
    if !fine_grid.is_power_of_two() {
        return Err(Error::invalid(format!("fine grid size {fine_grid} is not a power of two")));
    }
    let shape = lattice_shape(fine_grid.trailing_zeros() as usize, interp.dimension());
    Ok((0..fine_grid)
        .map(|i| {
            let t = fine_grid_point(i, &shape);
            f(&t) - interp.evaluate(&t)
        })
        .collect())
}

/// Sup-norm bound of `f − P_n f` over the class, before the safety factor.
///
/// For `r = 0` the cell-corner bound `min(d (h/2)^ρ, (√d h)^ρ)`; for `r ≥ 1`
/// a Taylor remainder `(d h/2)^r/r! · (√d h/2)^ρ` amplified by the tensor
/// Lebesgue constant.
pub fn residual_bound(spec: &HoelderSpec, cell_width: f64) -> f64 {
    let d = spec.d as f64;
    let h = cell_width;
    if spec.r == 0 {
        (d * (h / 2.0).powf(spec.rho)).min((d.sqrt() * h).powf(spec.rho))
    } else {
        let lambda = lebesgue_constant(spec.r).powi(spec.d as i32);
        let factorial: f64 = (1..=spec.r).map(|k| k as f64).product();
        (1.0 + lambda) * (d.sqrt() * h / 2.0).powf(spec.rho) * (d * h / 2.0).powi(spec.r as i32) / factorial
    }
}

/// Declared residual range `R`: twice [`residual_bound`].
pub fn residual_range(spec: &HoelderSpec, interp: &Interpolant) -> f64 {
    2.0 * residual_bound(spec, interp.cell_width())
}

/// The residual sequence as an oracle over `[−R, R]`.
pub fn residual_mean_target(
    f: &dyn Fn(&[f64]) -> f64,
    interp: &Interpolant,
    fine_grid: usize,
    value_bits: u32,
    range: f64,
) -> Result<SequenceOracle> {
    SequenceOracle::new(residual_sequence(f, interp, fine_grid)?, -range, range, value_bits)
}

#[derive(Clone)]
pub struct IntegrationTask {
    pub integrand: Integrand,
    pub spec: HoelderSpec,
    /// Coarse budget.
    pub n: usize,
    /// Fine-grid size `N`, a power of two.
    pub fine_grid: usize,
    /// Residual encoding bits `m₂`.
    pub value_bits: u32,
    pub config: EstimateConfig,
}

impl IntegrationTask {
    /// Task with `N` and `m₂` from [`choose_fine_grid`].
    pub fn new(integrand: Integrand, spec: HoelderSpec, n: usize, config: EstimateConfig) -> Result<Self> {
        let (fine_grid, value_bits) = choose_fine_grid(n, &spec)?;
        let task = IntegrationTask { integrand, spec, n, fine_grid, value_bits, config };
        task.validate()?;
        Ok(task)
    }

    pub fn with_fine_grid(mut self, fine_grid: usize, value_bits: u32) -> Result<Self> {
        self.fine_grid = fine_grid;
        self.value_bits = value_bits;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.fine_grid.is_power_of_two() || self.fine_grid < self.n {
            return Err(Error::Config(format!(
                "fine grid N = {} must be a power of two with N ≥ n = {}",
                self.fine_grid, self.n
            )));
        }
        self.config.validate()
    }
}

impl std::fmt::Debug for IntegrationTask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IntegrationTask")
            .field("spec", &self.spec)
            .field("n", &self.n)
            .field("fine_grid", &self.fine_grid)
            .field("value_bits", &self.value_bits)
            .field("config", &self.config)
            .finish()
    }
}

/// Result of the quantum pipeline with its intermediate quantities.
#[derive(Clone, Debug)]
pub struct QuantumIntegration {
    /// Estimate of `∫f`; `trials` hold the per-repetition totals.
    pub result: EstimateResult,
    /// `∫P_n f`.
    pub main: f64,
    /// Residual range `R` after any widening.
    pub residual_range: f64,
    /// Encoding interval actually used for the residual.
    pub encoding_range: (f64, f64),
    pub widenings: usize,
}

/// Stream reserved for the encoding-range offset, away from repetition streams.
const SHIFT_STREAM: u64 = u64::MAX;

pub fn integrate_quantum_detailed(task: &IntegrationTask) -> Result<QuantumIntegration> {
    task.validate()?;
    let f = task.integrand.as_ref();
    let interp = build_interpolant(f, &task.spec, task.n)?;
    let main = quadrature_main(&interp);
    let residual = residual_sequence(f, &interp, task.fine_grid)?;

    let scale = residual.iter().fold(main.abs().max(1.0), |m, v| m.max(v.abs()));
    if residual.iter().all(|v| v.abs() <= 1e-13 * scale) {
        log::info!("residual vanishes on the fine grid; returning the interpolant integral");
        let result = EstimateResult {
            value: main,
            queries_used: 0,
            cost: crate::circuit::CostReport::new(0, 0, 0),
            trials: vec![main; task.config.repetitions],
        };
        return Ok(QuantumIntegration { result, main, residual_range: 0.0, encoding_range: (0.0, 0.0), widenings: 0 });
    }

    // A random offset of the encoding window makes the grid error of the
    // amplitude estimate vary between trials instead of repeating the same
    // systematic offset for every seed.
    let u: f64 = stream_rng(task.config.seed, SHIFT_STREAM).random();
    let mut range = residual_range(&task.spec, &interp);
    let mut widenings = 0;
    let oracle = loop {
        let (lo, hi) = (-(1.0 + u) * range, (2.0 - u) * range);
        match SequenceOracle::new(residual.clone(), lo, hi, task.value_bits) {
            Ok(o) => break o,
            Err(Error::ValueOutOfRange { value, .. }) if widenings < MAX_WIDENINGS => {
                log::warn!("residual {value:e} exceeds declared range {range:e}; widening to {:e}", 2.0 * range);
                range *= 2.0;
                widenings += 1;
            }
            Err(e) => return Err(e),
        }
    };
    let encoding_range = oracle.range();
    let mut result = mean_real(&oracle, &task.config)?;
    result.value += main;
    result.trials.iter_mut().for_each(|v| *v += main);
    Ok(QuantumIntegration { result, main, residual_range: range, encoding_range, widenings })
}

/// `∫P_n f` plus the quantum estimate of the residual mean.
pub fn integrate_quantum(task: &IntegrationTask) -> Result<EstimateResult> {
    Ok(integrate_quantum_detailed(task)?.result)
}
