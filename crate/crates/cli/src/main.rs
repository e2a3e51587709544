//! `qmcsim`: demos, single algorithm runs and convergence studies on the
//! statevector simulator.
//!
//! Every subcommand is deterministic given `--seed`. Configuration mistakes
//! exit with status 2, other failures with status 1.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qmcsim::classical::Method;
use qmcsim::compiler::unitary_from_reals;
use qmcsim::estimation::mean::{mean_real_with, EstimateConfig, LoadingPath, DEFAULT_PHASE_BITS, DEFAULT_REPETITIONS};
use qmcsim::experiment::{
    default_n_grid, format_fit_summary, random_sequence, run_compile, run_convergence, run_grover, run_integrate,
    run_qrng, write_records_csv, ConvergenceStudy, StudyFamily, DEFAULT_PHASE_OFFSET, FORMAT_VERSION,
};
use qmcsim::integration::{Family, TENT_FAMILY};
use qmcsim::oracle::load_sequence_csv;
use qmcsim::state::stream_rng;
use qmcsim::Error;
use rand::Rng;

#[derive(Parser, Debug)]
#[command(name = "qmcsim", version, about = "Quantum mean estimation and integration experiments")]
struct Cli {
    /// Base seed; every random draw derives from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the main table here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Number of independent trials (meaning depends on the subcommand).
    #[arg(long, global = true)]
    trials: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Measure the uniform superposition on m qubits.
    Qrng {
        #[arg(long = "n-qubits", default_value_t = 4)]
        n_qubits: usize,
        /// Defaults to --trials, else 100000.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Search a unique marked entry among 2^m.
    Grover {
        #[arg(long = "n-qubits", default_value_t = 6)]
        n_qubits: usize,
        /// Marked index; drawn from the seed when omitted.
        #[arg(long)]
        marked: Option<usize>,
    },
    /// Estimate the mean of a real sequence.
    Mean(MeanArgs),
    /// Integrate a manifest function with the quantum pipeline.
    Integrate {
        #[arg(long, default_value = "abs-center")]
        function: String,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
        reps: usize,
    },
    /// Convergence study: median error per method and budget, with fitted rates.
    Compare(CompareArgs),
    /// Compile a 2×2 unitary given as eight reals, row-major (re, im) pairs.
    Compile {
        #[arg(num_args = 8, allow_negative_numbers = true, value_name = "RE_IM")]
        entries: Vec<f64>,
        /// Longest {W, T} word tried by the approximate search.
        #[arg(long = "max-len", default_value_t = 10)]
        max_len: usize,
    },
}

#[derive(Args, Debug)]
struct MeanArgs {
    /// Sequence file (`a,b,m2` header, then one value per line).
    #[arg(long = "values-file")]
    values_file: Option<PathBuf>,
    /// Length 2^m of the random sequence used without a file.
    #[arg(long = "n-qubits", default_value_t = 5)]
    n_qubits: usize,
    /// Encoding bits of the random sequence.
    #[arg(long = "value-bits", default_value_t = 8)]
    value_bits: u32,
    #[arg(long = "phase-bits", default_value_t = DEFAULT_PHASE_BITS)]
    phase_bits: usize,
    #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
    reps: usize,
    #[arg(long, value_enum, default_value_t = PathArg::Rotation)]
    path: PathArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PathArg {
    Rotation,
    Bit,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// A manifest name, `lipschitz-tents`, or `boolean`.
    #[arg(long, default_value = TENT_FAMILY)]
    function: String,
    /// Comma-separated methods.
    #[arg(long, value_delimiter = ',', default_value = "deterministic,cv-monte-carlo,quantum")]
    methods: Vec<String>,
    /// Comma-separated budgets; powers of two up to the qubit budget by default.
    #[arg(long = "n-grid", value_delimiter = ',')]
    n_grid: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
    reps: usize,
    /// Phase bits are ⌈log₂ n⌉ plus this offset.
    #[arg(long = "phase-offset", default_value_t = DEFAULT_PHASE_OFFSET)]
    phase_offset: usize,
    /// Sequence length for the Boolean family.
    #[arg(long, default_value_t = 1024)]
    len: usize,
    /// Number of Boolean sequences; trials are per sequence.
    #[arg(long, default_value_t = 20)]
    sequences: usize,
    /// Also write the fitted-rate summary here.
    #[arg(long)]
    summary: Option<PathBuf>,
}

fn output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn qrng(cli: &Cli, n_qubits: usize, samples: Option<usize>) -> Result<(), Error> {
    let samples = samples.or(cli.trials).unwrap_or(100_000);
    let report = run_qrng(n_qubits, samples, cli.seed)?;
    if let Some(path) = &cli.out {
        let mut w = output(Some(path))?;
        writeln!(w, "sample,outcome")?;
        for (k, s) in report.samples.iter().enumerate() {
            writeln!(w, "{k},{s}")?;
        }
        w.flush()?;
    }
    println!("outcome  count  frequency");
    for (i, (c, f)) in report.counts.iter().zip(report.frequencies()).enumerate() {
        println!("{i:>7}  {c:>5}  {f:.5}");
    }
    println!("chi-square {:.3} on {} dof, p = {:.4}", report.chi_square, report.counts.len() - 1, report.p_value);
    Ok(())
}

fn grover(cli: &Cli, n_qubits: usize, marked: Option<usize>) -> Result<(), Error> {
    if n_qubits == 0 || n_qubits >= usize::BITS as usize {
        return Err(Error::Config("--n-qubits must be at least 1".into()));
    }
    let marked = marked.unwrap_or_else(|| stream_rng(cli.seed, 7).random_range(0..1usize << n_qubits));
    let r = run_grover(n_qubits, marked, cli.trials.unwrap_or(1000), cli.seed)?;
    println!("N = {}, marked = {}, iterations = {}", r.len, r.marked, r.iterations);
    println!("success probability {:.6} (formula {:.6})", r.success_probability, r.predicted);
    println!("observed {}/{} = {:.4}", r.successes, r.trials, r.successes as f64 / r.trials.max(1) as f64);
    println!(
        "cost: {} queries, {} gates, {} qubits, total {}",
        r.cost.num_queries, r.cost.num_elementary_gates, r.cost.num_qubits, r.cost.total_cost
    );
    Ok(())
}

fn mean(cli: &Cli, args: &MeanArgs) -> Result<(), Error> {
    let oracle = match &args.values_file {
        Some(p) => load_sequence_csv(p)?,
        None => {
            if args.n_qubits >= 24 {
                return Err(Error::Config("--n-qubits too large for a random sequence".into()));
            }
            random_sequence(1 << args.n_qubits, args.value_bits, cli.seed)?
        }
    };
    let path = match args.path {
        PathArg::Rotation => LoadingPath::Rotation,
        PathArg::Bit => LoadingPath::BitRegister,
    };
    let config = EstimateConfig::new(args.phase_bits, args.reps, cli.seed)?;
    let r = mean_real_with(&oracle, &config, path)?;
    let (lo, hi) = oracle.range();
    println!("N = {}, range [{lo}, {hi}], m2 = {}", oracle.len(), oracle.value_bits());
    println!("estimate {:.6}, exact mean {:.6}, error {:.3e}", r.value, oracle.mean(), (r.value - oracle.mean()).abs());
    println!(
        "cost: {} queries ({} per run), {} gates, {} qubits, total {}",
        r.queries_used,
        r.queries_per_repetition(),
        r.cost.num_elementary_gates,
        r.cost.num_qubits,
        r.cost.total_cost
    );
    Ok(())
}

fn integrate(cli: &Cli, function: &str, n: usize, reps: usize) -> Result<(), Error> {
    let r = run_integrate(Family::parse(function)?, n, reps, cli.seed)?;
    println!("{} with n = {}: fine grid N = {}, m2 = {}", r.function, r.n, r.fine_grid, r.value_bits);
    println!("interpolant integral {:.8}", r.main);
    println!("estimate {:.8}, exact {:.8}, error {:.3e}", r.estimate, r.exact, r.error);
    if r.widenings > 0 {
        println!("residual range widened {} time(s)", r.widenings);
    }
    println!(
        "cost: {} queries, {} gates, {} qubits, total {}",
        r.cost.num_queries, r.cost.num_elementary_gates, r.cost.num_qubits, r.cost.total_cost
    );
    Ok(())
}

fn compare(cli: &Cli, args: &CompareArgs) -> Result<(), Error> {
    let family = if args.function == "boolean" {
        StudyFamily::Boolean { len: args.len, sequences: args.sequences }
    } else {
        StudyFamily::Integrand(Family::parse(&args.function)?)
    };
    let methods = args.methods.iter().map(|m| m.parse()).collect::<Result<Vec<Method>, _>>()?;
    let n_grid = if args.n_grid.is_empty() { default_n_grid(&family, args.phase_offset) } else { args.n_grid.clone() };
    let trials = cli.trials.unwrap_or(match family {
        StudyFamily::Boolean { .. } => 10,
        StudyFamily::Integrand(_) => 101,
    });
    let mut study = ConvergenceStudy::new(methods, family, n_grid, trials, cli.seed);
    study.repetitions = args.reps;
    study.phase_offset = args.phase_offset;
    log::info!("running {:?}", study);
    let report = run_convergence(&study)?;

    write_records_csv(&report.records, output(cli.out.as_deref())?)?;
    let summary = format_fit_summary(&report);
    if let Some(p) = &args.summary {
        std::fs::write(p, &summary)?;
    }
    if cli.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(())
}

fn compile(entries: &[f64], max_len: usize) -> Result<(), Error> {
    let reals: [f64; 8] =
        entries.try_into().map_err(|_| Error::Config("expected 8 reals: u00 re im, u01 re im, u10 re im, u11 re im".into()))?;
    // a malformed matrix on the command line is a usage problem, not a failure
    let r = run_compile(&unitary_from_reals(&reals), max_len).map_err(|e| match e {
        Error::NotUnitary { .. } => Error::Config(e.to_string()),
        other => other,
    })?;
    println!("exact:  {}  (length {}, distance {:.3e})", r.exact, r.exact.len(), r.exact_distance);
    println!("approx: {}  (length {}, distance {:.6})", r.approx, r.approx.len(), r.approx_distance);
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Error> {
    match &cli.command {
        Command::Qrng { n_qubits, samples } => qrng(cli, *n_qubits, *samples),
        Command::Grover { n_qubits, marked } => grover(cli, *n_qubits, *marked),
        Command::Mean(args) => mean(cli, args),
        Command::Integrate { function, n, reps } => integrate(cli, function, *n, *reps),
        Command::Compare(args) => compare(cli, args),
        Command::Compile { entries, max_len } => compile(entries, *max_len),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    log::debug!("{FORMAT_VERSION}: {cli:?}");
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_configuration() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
