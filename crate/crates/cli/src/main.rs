use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use seriation::experiments::{
    run_archeo, run_dna, run_markov, run_ygen, write_outputs, ArcheoConfig, DnaConfig, ExperimentOutput, MarkovConfig,
    YgenConfig, SUMMARY_FILE,
};
use seriation::io::{read_permutation, read_similarity, write_permutation};
use seriation::metrics::evaluate;
use seriation::pipeline::{seriate_qp, QpOptions};
use seriation::relax::{read_constraints, Algorithm};
use seriation::spectral::spectral_order_by_component;
use seriation::{spectral_order, SeriationError};

/// Orders items from pairwise similarities.
#[derive(Parser)]
#[command(name = "seriation", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orders the items of one similarity matrix.
    Seriate(SeriateArgs),
    /// Runs a seeded experiment and writes per-run rows and aggregates.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Spectral,
    Qp,
    QpSemi,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverChoice {
    Auto,
    InteriorPoint,
    Apg,
    FrankWolfe,
}

impl From<SolverChoice> for Algorithm {
    fn from(s: SolverChoice) -> Self {
        match s {
            SolverChoice::Auto => Algorithm::Auto,
            SolverChoice::InteriorPoint => Algorithm::InteriorPoint,
            SolverChoice::Apg => Algorithm::AcceleratedProjectedGradient,
            SolverChoice::FrankWolfe => Algorithm::FrankWolfe,
        }
    }
}

#[derive(Args)]
struct SolverFlags {
    /// μ as a fraction of the convexity bound.
    #[arg(long)]
    mu_frac: Option<f64>,
    /// Number of columns of Y (overrides --p-frac).
    #[arg(long)]
    p_cols: Option<usize>,
    #[arg(long, value_enum, default_value = "auto")]
    algorithm: SolverChoice,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Rounding draws.
    #[arg(long)]
    draws: Option<usize>,
}

impl SolverFlags {
    fn apply(&self, qp: &mut QpOptions, p_frac: Option<f64>, seed: u64) {
        qp.seed = seed;
        qp.solver.seed = seed;
        qp.solver.algorithm = self.algorithm.into();
        if let Some(mu) = self.mu_frac {
            qp.solver.mu_fraction = mu;
        }
        if let Some(it) = self.max_iters {
            qp.solver.max_iters = it;
        }
        if let Some(d) = self.draws {
            qp.draws = d;
        }
        if let Some(p) = p_frac {
            qp.p_fraction = p;
        }
        qp.p_columns = self.p_cols;
    }
}

#[derive(Args)]
struct SeriateArgs {
    /// Dense whitespace-separated matrix or Matrix Market file.
    matrix: PathBuf,
    #[arg(long, value_enum, default_value = "spectral")]
    method: Method,
    /// Constraint file with `ord i j` / `dist i j a b` lines (1-based).
    #[arg(long)]
    constraints: Option<PathBuf>,
    /// Known order (one 1-based index per line), to report τ and ρ.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Spectral: order each connected component separately.
    #[arg(long)]
    by_component: bool,
    #[arg(long)]
    p_frac: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    solver: SolverFlags,
    /// Output directory for ordering.txt and report.json.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentName {
    Markov,
    Archeo,
    Dna,
    Ygen,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExperimentMethod {
    Spectral,
    QpReg,
    QpSemi,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(value_enum)]
    name: ExperimentName,
    /// Methods to run besides the spectral baseline (markov, archeo).
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["spectral", "qp-reg", "qp-semi"])]
    method: Vec<ExperimentMethod>,
    /// Fractions of true pairwise orders given to qp-semi (markov).
    #[arg(long, value_delimiter = ',')]
    constraints: Option<Vec<f64>>,
    /// Fraction of wrong constraints (markov).
    #[arg(long)]
    error_rate: Option<f64>,
    /// p/n; a comma-separated sweep for ygen.
    #[arg(long, value_delimiter = ',')]
    p_frac: Option<Vec<f64>>,
    /// Samples of the Markov chain; 0 uses the exact covariance.
    #[arg(long)]
    samples: Option<usize>,
    /// Items of the Markov chain.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    runs: Option<usize>,
    /// Fraction of flipped entries of the synthetic archeology matrix.
    #[arg(long)]
    flip_fraction: Option<f64>,
    #[arg(long)]
    genome_length: Option<usize>,
    #[arg(long)]
    repeat_length: Option<usize>,
    /// Distance between mate starts; 0 for unpaired reads.
    #[arg(long)]
    mate_gap: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Concurrent runs; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[command(flatten)]
    solver: SolverFlags,
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

/// Errors in reading or parsing input exit with 2, the rest with 1.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<SeriationError>() {
        Some(
            SeriationError::Io(_)
            | SeriationError::Parse { .. }
            | SeriationError::Csv(_)
            | SeriationError::NotSquare { .. }
            | SeriationError::NotSymmetric { .. }
            | SeriationError::InvalidEntry { .. }
            | SeriationError::InvalidPermutation(_),
        ) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Seriate(args) => seriate(&args),
        Command::Experiment(args) => experiment(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn read_input<T>(what: &str, path: &Path, f: impl FnOnce(&Path) -> seriation::Result<T>) -> anyhow::Result<T> {
    f(path).map_err(anyhow::Error::from).with_context(|| format!("reading {what} {}", path.display()))
}

fn seriate(args: &SeriateArgs) -> anyhow::Result<()> {
    let start = Instant::now();
    let a = read_input("matrix", &args.matrix, |p| read_similarity(p))?;
    let truth = match &args.truth {
        Some(p) => Some(read_input("truth", p, |p| read_permutation(p))?),
        None => None,
    };
    let specs = match &args.constraints {
        Some(p) => read_input("constraints", p, |p| read_constraints(p))?,
        None if args.method == Method::QpSemi => anyhow::bail!("--method qp-semi needs --constraints"),
        None => Vec::new(),
    };
    let load_secs = start.elapsed().as_secs_f64();

    let solve_start = Instant::now();
    let mut qp = QpOptions::default();
    args.solver.apply(&mut qp, args.p_frac, args.seed);
    let (permutation, solver_report) = match args.method {
        Method::Spectral if args.by_component => (spectral_order_by_component(&a)?, None),
        Method::Spectral => (spectral_order(&a)?, None),
        Method::Qp | Method::QpSemi => {
            let out = seriate_qp(&a, &specs, &qp)?;
            (out.permutation, Some(out.report))
        }
    };
    let solve_secs = solve_start.elapsed().as_secs_f64();
    let eval = evaluate(&a, &permutation, truth.as_ref(), None)?;

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let ordering = args.out.join("ordering.txt");
    write_permutation(&ordering, &permutation)?;
    let method = match args.method {
        Method::Spectral => "spectral",
        Method::Qp => "qp",
        Method::QpSemi => "qp_semi",
    };
    let report = json!({
        "method": method,
        "n": a.n(),
        "objective": eval.objective,
        "r_violations": eval.r_violations,
        "tau": eval.tau,
        "rho": eval.rho,
        "seed": args.seed,
        "config": {
            "matrix": args.matrix,
            "constraints": args.constraints,
            "constraint_count": specs.len(),
            "by_component": args.by_component,
            "qp": (args.method != Method::Spectral).then_some(&qp),
        },
        "solver": solver_report,
        "timings": {
            "load_secs": load_secs,
            "solve_secs": solve_secs,
            "total_secs": start.elapsed().as_secs_f64(),
        },
    });
    fs::write(args.out.join("report.json"), serde_json::to_string_pretty(&report)?)?;
    println!("{}", ordering.display());
    Ok(())
}

fn single(values: &Option<Vec<f64>>, flag: &str) -> anyhow::Result<Option<f64>> {
    match values.as_deref() {
        None => Ok(None),
        Some([v]) => Ok(Some(*v)),
        Some(_) => anyhow::bail!("{flag} takes a single value for this experiment"),
    }
}

fn experiment(args: &ExperimentArgs) -> anyhow::Result<()> {
    let mut qp = QpOptions::default();
    let wants = |m| args.method.contains(&m);
    let (name, output) = match args.name {
        ExperimentName::Markov => {
            let mut cfg = MarkovConfig { seed: args.seed, jobs: args.jobs, ..MarkovConfig::default() };
            args.solver.apply(&mut qp, single(&args.p_frac, "--p-frac")?, args.seed);
            cfg.qp = qp;
            cfg.n = args.n.unwrap_or(cfg.n);
            cfg.samples = args.samples.unwrap_or(cfg.samples);
            cfg.runs = args.runs.unwrap_or(cfg.runs);
            cfg.error_rate = args.error_rate.unwrap_or(cfg.error_rate);
            cfg.unconstrained = wants(ExperimentMethod::QpReg);
            cfg.fractions = if wants(ExperimentMethod::QpSemi) {
                args.constraints.clone().unwrap_or(cfg.fractions)
            } else {
                Vec::new()
            };
            let out = run_markov(&cfg)?;
            ("markov", save(&args.out, "markov", &cfg, out)?)
        }
        ExperimentName::Archeo => {
            let mut cfg = ArcheoConfig { seed: args.seed, jobs: args.jobs, ..ArcheoConfig::default() };
            args.solver.apply(&mut qp, single(&args.p_frac, "--p-frac")?, args.seed);
            cfg.qp = qp;
            cfg.runs = args.runs.unwrap_or(cfg.runs);
            cfg.flip_fraction = args.flip_fraction.unwrap_or(cfg.flip_fraction);
            cfg.with_qp = wants(ExperimentMethod::QpReg);
            let out = run_archeo(&cfg)?;
            ("archeo", save(&args.out, "archeo", &cfg, out)?)
        }
        ExperimentName::Dna => {
            let mut cfg = DnaConfig { seed: args.seed, jobs: args.jobs, ..DnaConfig::default() };
            args.solver.apply(&mut cfg.assembly.qp, single(&args.p_frac, "--p-frac")?, args.seed);
            cfg.runs = args.runs.unwrap_or(cfg.runs);
            cfg.reads.genome_length = args.genome_length.unwrap_or(cfg.reads.genome_length);
            cfg.reads.repeat_length = args.repeat_length.unwrap_or(cfg.reads.repeat_length);
            cfg.reads.mate_gap = args.mate_gap.unwrap_or(cfg.reads.mate_gap);
            let out = run_dna(&cfg)?;
            ("dna", save(&args.out, "dna", &cfg, out)?)
        }
        ExperimentName::Ygen => {
            let mut cfg = YgenConfig { seed: args.seed, jobs: args.jobs, ..YgenConfig::default() };
            args.solver.apply(&mut qp, None, args.seed);
            cfg.qp = qp;
            cfg.n = args.n.unwrap_or(cfg.n);
            cfg.samples = args.samples.unwrap_or(cfg.samples);
            cfg.runs = args.runs.unwrap_or(cfg.runs);
            cfg.p_fractions = args.p_frac.clone().unwrap_or(cfg.p_fractions);
            let out = run_ygen(&cfg)?;
            ("ygen", save(&args.out, "ygen", &cfg, out)?)
        }
    };
    print!("{}", fs::read_to_string(output.join(SUMMARY_FILE))?);
    log::info!("{name} results in {}", output.display());
    Ok(())
}

fn save<C: serde::Serialize>(out: &Path, name: &str, cfg: &C, output: ExperimentOutput) -> anyhow::Result<PathBuf> {
    if let Some(notice) = &output.notice {
        eprintln!("notice: {notice}");
    }
    write_outputs(out, name, cfg, &output)?;
    Ok(out.to_path_buf())
}
