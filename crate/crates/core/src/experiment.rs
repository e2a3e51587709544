//! Experiment drivers behind the command-line tool: quantum random numbers,
//! search and mean demos, convergence studies with CSV output, and
//! single-qubit compilation reports.
//!
//! Every random choice is drawn from a ChaCha stream derived from the run
//! seed, so any output row can be regenerated from its configuration.

use std::io::Write;

use rand::{Rng, RngCore};
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::circuit::{apply_circuit, tally_cost, Circuit, CostReport};
use crate::classical::{
    cv_mc_integrate, det_quadrature, fit_rate, mc_integrate, mc_mean, ConvergenceRecord, Method, RateFit, RecordCost,
};
use crate::compiler::{approx_search, compile_single_qubit, phase_distance, GateWord, Unitary2};
use crate::error::{Error, Result};
use crate::estimation::amplitude::{AmplitudeEstimator, AmplitudeProblem};
use crate::estimation::grover::{grover_circuit, grover_iterations, grover_success_formula};
use crate::estimation::mean::{boosted_estimate, mean_real, EstimateConfig, EstimateResult};
use crate::gate::GateOp;
use crate::integration::task::{integrate_quantum_detailed, IntegrationTask, MAX_FINE_GRID_BITS};
use crate::integration::{build_interpolant, choose_fine_grid, Family};
use crate::oracle::{BooleanOracle, SequenceOracle};
use crate::state::{stream_rng, Sampler, StateVector, MAX_QUBITS};

/// Header of every convergence CSV.
pub const CSV_HEADER: &str = "method,n,trials,median_error,queries,gates,qubits,total_cost,seed";
pub const FORMAT_VERSION: &str = "qmcsim-convergence/1";
/// Phase bits added to `⌈log₂ n⌉` in integration studies.
pub const DEFAULT_PHASE_OFFSET: usize = 4;
/// Largest simulated register the default n-grids will schedule.
pub const DEFAULT_QUBIT_BUDGET: usize = 20;

/// Mixes a run seed with labels into an independent sub-seed.
pub fn derive_seed(seed: u64, labels: &[u64]) -> u64 {
    labels.iter().fold(seed, |s, &l| stream_rng(s, l).next_u64())
}

#[derive(Clone, Debug, Serialize)]
pub struct QrngReport {
    pub qubits: usize,
    pub seed: u64,
    pub samples: Vec<usize>,
    pub counts: Vec<u64>,
    pub chi_square: f64,
    pub p_value: f64,
}

impl QrngReport {
    pub fn frequencies(&self) -> Vec<f64> {
        let total = self.samples.len() as f64;
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }
}

/// Measures `W^{⊗m}|0⟩` `samples` times.
pub fn run_qrng(qubits: usize, samples: usize, seed: u64) -> Result<QrngReport> {
    if qubits == 0 || qubits > MAX_QUBITS {
        return Err(Error::Config(format!("qubit count must be in 1..={MAX_QUBITS}, got {qubits}")));
    }
    let circuit = Circuit::from_ops(qubits, (0..qubits).map(GateOp::w).collect())?;
    let mut state = StateVector::classical(qubits, 0)?;
    apply_circuit(&mut state, &circuit)?;
    let sampler = Sampler::from_state(&state)?;
    let mut rng = stream_rng(seed, 0);
    let drawn: Vec<usize> = (0..samples).map(|_| sampler.sample(&mut rng)).collect();
    let bins = 1usize << qubits;
    let mut counts = vec![0u64; bins];
    for &s in &drawn {
        counts[s] += 1;
    }
    let expected = samples as f64 / bins as f64;
    let chi_square = if samples == 0 {
        0.0
    } else {
        counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum()
    };
    let p_value = ChiSquared::new((bins - 1) as f64)
        .map(|dist| dist.sf(chi_square))
        .unwrap_or(1.0);
    Ok(QrngReport { qubits, seed, samples: drawn, counts, chi_square, p_value })
}

#[derive(Clone, Debug, Serialize)]
pub struct GroverReport {
    pub len: usize,
    pub marked: usize,
    pub iterations: usize,
    /// Exact probability of measuring the marked index.
    pub success_probability: f64,
    /// `sin²((2k+1)θ)`.
    pub predicted: f64,
    pub trials: usize,
    pub successes: usize,
    pub cost: CostReport,
    pub seed: u64,
}

/// Simulates the search once and measures it `trials` times.
pub fn run_grover(index_bits: usize, marked: usize, trials: usize, seed: u64) -> Result<GroverReport> {
    if index_bits == 0 || index_bits + 1 > MAX_QUBITS {
        return Err(Error::Config(format!("index register needs 1..={} qubits", MAX_QUBITS - 1)));
    }
    let len = 1usize << index_bits;
    if marked >= len {
        return Err(Error::Config(format!("marked index {marked} outside 0..{len}")));
    }
    let oracle = BooleanOracle::unique(len, marked)?;
    let circuit = grover_circuit(&oracle)?;
    let mut state = StateVector::classical(circuit.num_qubits(), 0)?;
    apply_circuit(&mut state, &circuit)?;
    let index_probs = state.marginal_probabilities(&(0..index_bits).collect::<Vec<_>>())?;
    let sampler = Sampler::new(&index_probs)?;
    let mut rng = stream_rng(seed, 0);
    let successes = (0..trials).filter(|_| sampler.sample(&mut rng) == marked).count();
    let iterations = grover_iterations(len);
    Ok(GroverReport {
        len,
        marked,
        iterations,
        success_probability: index_probs[marked],
        predicted: grover_success_formula(len, iterations),
        trials,
        successes,
        cost: tally_cost(&circuit),
        seed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MeanReport {
    pub len: usize,
    pub exact_mean: f64,
    pub estimate: EstimateResult,
    pub config: EstimateConfig,
}

/// Random values in `[−1, 1]` for demos without a values file.
pub fn random_sequence(len: usize, value_bits: u32, seed: u64) -> Result<SequenceOracle> {
    let mut rng = stream_rng(seed, 1);
    let values = (0..len).map(|_| rng.random_range(-1.0..=1.0)).collect();
    SequenceOracle::new(values, -1.0, 1.0, value_bits)
}

pub fn run_mean(oracle: &SequenceOracle, config: &EstimateConfig) -> Result<MeanReport> {
    let estimate = mean_real(oracle, config)?;
    Ok(MeanReport { len: oracle.len(), exact_mean: oracle.mean(), estimate, config: *config })
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegrateReport {
    pub function: String,
    pub n: usize,
    pub fine_grid: usize,
    pub value_bits: u32,
    pub main: f64,
    pub estimate: f64,
    pub exact: f64,
    pub error: f64,
    pub cost: CostReport,
    pub widenings: usize,
    pub seed: u64,
}

/// Phase bits used for budget `n`: `⌈log₂ n⌉ + offset`.
pub fn phase_bits_for(n: usize, offset: usize) -> usize {
    n.next_power_of_two().trailing_zeros() as usize + offset
}

pub fn run_integrate(family: Family, n: usize, repetitions: usize, seed: u64) -> Result<IntegrateReport> {
    let (f, exact) = family.instance(n);
    let config = EstimateConfig::new(phase_bits_for(n, DEFAULT_PHASE_OFFSET), repetitions, seed)?;
    let task = IntegrationTask::new(f, family.spec(), n, config)?;
    check_budget(&task)?;
    let out = integrate_quantum_detailed(&task)?;
    Ok(IntegrateReport {
        function: family.name().to_string(),
        n,
        fine_grid: task.fine_grid,
        value_bits: task.value_bits,
        main: out.main,
        estimate: out.result.value,
        exact,
        error: (out.result.value - exact).abs(),
        cost: out.result.cost,
        widenings: out.widenings,
        seed,
    })
}

fn check_budget(task: &IntegrationTask) -> Result<()> {
    let qubits = task.fine_grid.trailing_zeros() as usize + 1 + task.config.phase_bits;
    if qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits { num_qubits: qubits, max: MAX_QUBITS });
    }
    Ok(())
}

/// What a convergence study integrates or averages.
#[derive(Clone, Copy, Debug)]
pub enum StudyFamily {
    Integrand(Family),
    /// `sequences` Boolean sequences of length `len` with densities drawn
    /// uniformly from `[0.1, 0.9]`; the budget `n` is `M = 2^t`.
    Boolean { len: usize, sequences: usize },
}

#[derive(Clone, Debug)]
pub struct ConvergenceStudy {
    pub methods: Vec<Method>,
    pub family: StudyFamily,
    pub n_grid: Vec<usize>,
    /// Trials per `(method, n)`; for Boolean studies, runs per sequence.
    pub trials: usize,
    pub repetitions: usize,
    pub phase_offset: usize,
    pub seed: u64,
}

impl ConvergenceStudy {
    pub fn new(methods: Vec<Method>, family: StudyFamily, n_grid: Vec<usize>, trials: usize, seed: u64) -> Self {
        ConvergenceStudy {
            methods,
            family,
            n_grid,
            trials,
            repetitions: crate::estimation::mean::DEFAULT_REPETITIONS,
            phase_offset: DEFAULT_PHASE_OFFSET,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.n_grid.is_empty() || self.methods.is_empty() {
            return Err(Error::Config("need at least one method and one n".into()));
        }
        if let StudyFamily::Boolean { len, sequences } = self.family {
            if !len.is_power_of_two() || sequences == 0 {
                return Err(Error::Config("Boolean study needs a power-of-two length and ≥ 1 sequence".into()));
            }
            if self.n_grid.iter().any(|m| !m.is_power_of_two() || *m < 2) {
                return Err(Error::Config("Boolean study budgets are M = 2^t with t ≥ 1".into()));
            }
        }
        EstimateConfig::new(1, self.repetitions, 0)?;
        Ok(())
    }
}

/// Powers of two from 4 up to the largest budget whose simulation fits
/// [`DEFAULT_QUBIT_BUDGET`]: fine-grid index qubits, one ancilla and the
/// phase register for integrands; index, ancilla and phase register for
/// Boolean sequences.
pub fn default_n_grid(family: &StudyFamily, phase_offset: usize) -> Vec<usize> {
    let fits = |n: usize| -> bool {
        match family {
            StudyFamily::Integrand(f) => match choose_fine_grid(n, &f.spec()) {
                Ok((fine, _)) => {
                    fine.trailing_zeros() as usize + 1 + phase_bits_for(n, phase_offset) <= DEFAULT_QUBIT_BUDGET
                }
                Err(_) => false,
            },
            StudyFamily::Boolean { len, .. } => {
                len.trailing_zeros() as usize + 1 + n.trailing_zeros() as usize <= DEFAULT_QUBIT_BUDGET
            }
        }
    };
    (2..MAX_FINE_GRID_BITS).map(|k| 1usize << k).take_while(|&n| fits(n)).collect()
}

#[derive(Clone, Debug)]
pub struct StudyReport {
    pub records: Vec<ConvergenceRecord>,
    pub fits: Vec<(Method, Option<RateFit>)>,
}

impl StudyReport {
    pub fn fit(&self, method: Method) -> Option<&RateFit> {
        self.fits.iter().find(|(m, _)| *m == method).and_then(|(_, f)| f.as_ref())
    }

    pub fn record(&self, method: Method, n: usize) -> Option<&ConvergenceRecord> {
        self.records.iter().find(|r| r.method == method && r.n == n)
    }
}

fn method_label(m: Method) -> u64 {
    m as u64
}

fn integrand_record(study: &ConvergenceStudy, family: Family, method: Method, n: usize) -> Result<ConvergenceRecord> {
    let (f, exact) = family.instance(n);
    let spec = family.spec();
    let trial_seed = |j: usize| derive_seed(study.seed, &[method_label(method), n as u64, j as u64]);
    let nodes = build_interpolant(f.as_ref(), &spec, n)?.node_count() as u64;
    match method {
        Method::Deterministic => {
            let err = det_quadrature(f.as_ref(), &spec, n)? - exact;
            ConvergenceRecord::new(method, n, &[err], RecordCost::Classical { evaluations: nodes }, study.seed)
        }
        Method::MonteCarlo => {
            let errs = (0..study.trials)
                .map(|j| Ok(mc_integrate(f.as_ref(), spec.d, n, &mut stream_rng(trial_seed(j), 0))? - exact))
                .collect::<Result<Vec<_>>>()?;
            ConvergenceRecord::new(method, n, &errs, RecordCost::Classical { evaluations: n as u64 }, study.seed)
        }
        Method::CvMonteCarlo => {
            let errs = (0..study.trials)
                .map(|j| Ok(cv_mc_integrate(f.as_ref(), &spec, n, &mut stream_rng(trial_seed(j), 0))? - exact))
                .collect::<Result<Vec<_>>>()?;
            let cost = RecordCost::Classical { evaluations: nodes + n as u64 };
            ConvergenceRecord::new(method, n, &errs, cost, study.seed)
        }
        Method::Quantum => {
            let t = phase_bits_for(n, study.phase_offset);
            let mut errs = Vec::with_capacity(study.trials);
            let mut cost = CostReport::new(0, 0, 0);
            for j in 0..study.trials {
                let config = EstimateConfig::new(t, study.repetitions, trial_seed(j))?;
                let task = IntegrationTask::new(f.clone(), spec, n, config)?;
                check_budget(&task)?;
                let out = integrate_quantum_detailed(&task)?;
                errs.push(out.result.value - exact);
                cost = out.result.cost;
            }
            ConvergenceRecord::new(method, n, &errs, RecordCost::Quantum(cost), study.seed)
        }
    }
}

/// The Boolean sequences of a study, regenerated from its seed.
pub fn boolean_corpus(len: usize, sequences: usize, seed: u64) -> Result<Vec<BooleanOracle>> {
    (0..sequences)
        .map(|k| {
            let mut rng = stream_rng(derive_seed(seed, &[u64::MAX, k as u64]), 0);
            let density = rng.random_range(0.1..=0.9);
            BooleanOracle::new((0..len).map(|_| rng.random::<f64>() < density).collect())
        })
        .collect()
}

fn boolean_records(study: &ConvergenceStudy, len: usize, sequences: usize) -> Result<Vec<ConvergenceRecord>> {
    let corpus = boolean_corpus(len, sequences, study.seed)?;
    let mut records = Vec::new();
    for &method in &study.methods {
        for &m in &study.n_grid {
            let t = m.trailing_zeros() as usize;
            let mut errs = Vec::new();
            let mut cost = RecordCost::Classical { evaluations: m as u64 };
            for (k, oracle) in corpus.iter().enumerate() {
                let exact = oracle.mean();
                let seed_of = |j: usize| derive_seed(study.seed, &[method_label(method), m as u64, k as u64, j as u64]);
                match method {
                    Method::Quantum => {
                        let estimator = AmplitudeEstimator::new(&AmplitudeProblem::boolean(oracle)?, t)?;
                        for j in 0..study.trials {
                            let result = boosted_estimate(&estimator, study.repetitions, seed_of(j))?;
                            errs.push(result.value - exact);
                            cost = RecordCost::Quantum(result.cost);
                        }
                    }
                    Method::MonteCarlo => {
                        let values: Vec<f64> = oracle.values().iter().map(|&b| f64::from(u8::from(b))).collect();
                        for j in 0..study.trials {
                            errs.push(mc_mean(&values, m, &mut stream_rng(seed_of(j), 0))? - exact);
                        }
                    }
                    other => {
                        return Err(Error::Config(format!("method '{other}' does not apply to Boolean sequences")));
                    }
                }
            }
            records.push(ConvergenceRecord::new(method, m, &errs, cost, study.seed)?);
        }
    }
    Ok(records)
}

/// Runs every `(method, n)` cell and fits a rate per method.
pub fn run_convergence(study: &ConvergenceStudy) -> Result<StudyReport> {
    study.validate()?;
    let mut records = match study.family {
        StudyFamily::Integrand(family) => {
            let mut out = Vec::new();
            for &method in &study.methods {
                for &n in &study.n_grid {
                    out.push(integrand_record(study, family, method, n)?);
                }
            }
            out
        }
        StudyFamily::Boolean { len, sequences } => boolean_records(study, len, sequences)?,
    };
    records.sort_by_key(|r| (r.method, r.n));
    let mut methods = study.methods.clone();
    methods.sort();
    methods.dedup();
    let fits = methods
        .into_iter()
        .map(|m| {
            let rows: Vec<ConvergenceRecord> = records.iter().filter(|r| r.method == m).copied().collect();
            (m, fit_rate(&rows).ok())
        })
        .collect();
    Ok(StudyReport { records, fits })
}

#[derive(Serialize)]
struct CsvRow {
    method: &'static str,
    n: usize,
    trials: usize,
    median_error: f64,
    queries: u64,
    gates: u64,
    qubits: u64,
    total_cost: u64,
    seed: u64,
}

impl From<&ConvergenceRecord> for CsvRow {
    fn from(r: &ConvergenceRecord) -> Self {
        let (queries, gates, qubits, total_cost) = match r.cost {
            RecordCost::Quantum(c) => (c.num_queries, c.num_elementary_gates, c.num_qubits, c.total_cost),
            RecordCost::Classical { evaluations } => (evaluations, 0, 0, evaluations),
        };
        CsvRow {
            method: r.method.as_str(),
            n: r.n,
            trials: r.trials,
            median_error: r.median_error,
            queries,
            gates,
            qubits,
            total_cost,
            seed: r.seed,
        }
    }
}

/// Writes records as CSV under [`CSV_HEADER`].
pub fn write_records_csv<W: Write>(records: &[ConvergenceRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(CsvRow::from(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn records_to_csv(records: &[ConvergenceRecord]) -> Result<String> {
    let mut buf = Vec::new();
    if records.is_empty() {
        buf.extend_from_slice(CSV_HEADER.as_bytes());
        buf.push(b'\n');
    } else {
        write_records_csv(records, &mut buf)?;
    }
    String::from_utf8(buf).map_err(|e| Error::invalid(e.to_string()))
}

/// One line per method: slope, intercept and R².
pub fn format_fit_summary(report: &StudyReport) -> String {
    let mut s = format!("# {FORMAT_VERSION}\n# method slope intercept r_squared\n");
    for (m, fit) in &report.fits {
        match fit {
            Some(f) => s.push_str(&format!("{m} {:.4} {:.4} {:.4}\n", f.slope, f.intercept, f.r_squared)),
            None => s.push_str(&format!("{m} nan nan nan\n")),
        }
    }
    s
}

#[derive(Clone, Debug)]
pub struct CompileReport {
    pub exact: GateWord,
    pub exact_distance: f64,
    pub approx: GateWord,
    pub approx_distance: f64,
    pub max_len: usize,
}

/// Exact compilation into `{W, P_θ}` and the best `{W, T}` word up to `max_len`.
pub fn run_compile(u: &Unitary2, max_len: usize) -> Result<CompileReport> {
    let exact = compile_single_qubit(u)?;
    let exact_distance = phase_distance(u, &exact.matrix());
    let (approx, approx_distance) = approx_search(u, max_len)?;
    Ok(CompileReport { exact, exact_distance, approx, approx_distance, max_len })
}
