use std::path::{Path, PathBuf};
use std::process;

use abstract_model::FiniteModel;
use clap::{Args, Parser, Subcommand};
use regdp_cli::{
    atomic_write, content_hash, run_classify, run_oracle, run_report, run_scan, run_solve, Algo,
    BuilderSpec, CliError, EvalChoice, ExperimentConfig, ModelFile, RegionChoice, StartSpec,
    TieBreakChoice, VerbOutput, EXIT_CONVERGED, EXIT_ERROR,
};

/// Total-cost dynamic programming workbench: generate models, run
/// solvers, classify policies, scan for fixed points, and compare
/// against a brute-force reference.
#[derive(Parser)]
#[command(name = "regdp", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a model file from a named builder.
    Generate {
        #[command(subcommand)]
        builder: GenerateBuilder,
    },
    /// Run one solver; exit code reflects the outcome.
    Solve(SolveArgs),
    /// Classify every stationary policy and check the PI properties.
    Classify(ClassifyArgs),
    /// Sweep a value grid for fixed points of the Bellman operator.
    Scan(ScanArgs),
    /// Dump the brute-force reference result.
    Oracle(OracleArgs),
    /// Bundle solve, classify, and oracle into one report.
    Report(ReportArgs),
}

#[derive(Subcommand)]
enum GenerateBuilder {
    /// Two-state continue-or-stop model: looping costs `a`, stopping
    /// costs `b`.
    Detsp {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Line grid where every move costs one.
    GridUnit {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Line grid with free interior moves and a single payoff on the
    /// edge into the stop cell.
    GridTerminalReward {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        reward: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Line grid with the same left/right/stay costs at every cell.
    GridUniform {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        left: f64,
        #[arg(long, allow_negative_numbers = true)]
        right: f64,
        #[arg(long, allow_negative_numbers = true)]
        stay: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded random stochastic shortest path instance; any positive
    /// bias makes every policy proper.
    RandomSsp {
        #[arg(long)]
        states: usize,
        #[arg(long)]
        controls: usize,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        cost_lo: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        cost_hi: f64,
        #[arg(long, default_value_t = 0.3)]
        proper_bias: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded instance with stage costs in [0, 1].
    NonnegMdp {
        #[arg(long)]
        states: usize,
        #[arg(long)]
        controls: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded discounted instance without a stop set.
    Discounted {
        #[arg(long)]
        states: usize,
        #[arg(long)]
        controls: usize,
        #[arg(long, default_value_t = 0.9)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl GenerateBuilder {
    fn split(self) -> (BuilderSpec, Option<PathBuf>) {
        match self {
            GenerateBuilder::Detsp { a, b, out } => (BuilderSpec::Detsp { a, b }, out),
            GenerateBuilder::GridUnit { n, out } => (BuilderSpec::GridUnit { n }, out),
            GenerateBuilder::GridTerminalReward { n, reward, out } => {
                (BuilderSpec::GridTerminalReward { n, reward }, out)
            }
            GenerateBuilder::GridUniform {
                n,
                left,
                right,
                stay,
                out,
            } => (
                BuilderSpec::GridUniform {
                    n,
                    left,
                    right,
                    stay,
                },
                out,
            ),
            GenerateBuilder::RandomSsp {
                states,
                controls,
                cost_lo,
                cost_hi,
                proper_bias,
                seed,
                out,
            } => (
                BuilderSpec::RandomSsp {
                    states,
                    controls,
                    cost_lo,
                    cost_hi,
                    proper_bias,
                    seed,
                },
                out,
            ),
            GenerateBuilder::NonnegMdp {
                states,
                controls,
                seed,
                out,
            } => (
                BuilderSpec::NonnegMdp {
                    states,
                    controls,
                    seed,
                },
                out,
            ),
            GenerateBuilder::Discounted {
                states,
                controls,
                alpha,
                seed,
                out,
            } => (
                BuilderSpec::Discounted {
                    states,
                    controls,
                    alpha,
                    seed,
                },
                out,
            ),
        }
    }
}

/// Experiment overrides shared by every verb; unset flags keep the
/// documented defaults.
#[derive(Args)]
struct ConfigArgs {
    /// Convergence tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Iteration budget.
    #[arg(long)]
    max_iter: Option<usize>,
    /// Divergence-certificate threshold.
    #[arg(long, allow_negative_numbers = true)]
    blowup_bound: Option<f64>,
    /// Iteration budget for classification probes.
    #[arg(long)]
    horizon_cap: Option<usize>,
    /// Start function: "terminal", a constant, or a comma-separated
    /// vector (entries may be "+inf" / "-inf").
    #[arg(long, allow_hyphen_values = true)]
    start: Option<StartSpec>,
    /// Initial policy for pi: comma-separated control ids, one per
    /// state.
    #[arg(long, value_delimiter = ',')]
    start_policy: Option<Vec<usize>>,
    /// How pi breaks ties between equally good controls.
    #[arg(long, value_enum)]
    tie_break: Option<TieBreakChoice>,
    /// How pi evaluates each policy.
    #[arg(long, value_enum)]
    eval: Option<EvalChoice>,
    /// Evaluation steps per opi round (last entry repeats).
    #[arg(long, value_delimiter = ',')]
    m_schedule: Option<Vec<usize>>,
    /// Perturbation magnitudes, strictly decreasing.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    delta_schedule: Option<Vec<f64>>,
    /// LP box lower bound.
    #[arg(long, allow_negative_numbers = true)]
    lp_lower: Option<f64>,
    /// LP box upper bound.
    #[arg(long, allow_negative_numbers = true)]
    lp_upper: Option<f64>,
    /// LP objective weights, one per state.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lp_weights: Option<Vec<f64>>,
    /// Cost-function region for regularity machinery.
    #[arg(long, value_enum)]
    region: Option<RegionChoice>,
    /// Seed for region probe sampling.
    #[arg(long)]
    seed: Option<u64>,
}

impl ConfigArgs {
    fn resolve(
        self,
        algo: Option<Algo>,
        out_summary: Option<PathBuf>,
        out_trace: Option<PathBuf>,
    ) -> ExperimentConfig {
        let mut config = ExperimentConfig::default();
        if let Some(algo) = algo {
            config.algo = algo;
        }
        if let Some(tol) = self.tol {
            config.tol = tol;
        }
        if let Some(max_iter) = self.max_iter {
            config.max_iter = max_iter;
        }
        if let Some(bound) = self.blowup_bound {
            config.blowup_bound = bound;
        }
        if let Some(cap) = self.horizon_cap {
            config.horizon_cap = cap;
        }
        if let Some(start) = self.start {
            config.start = start;
        }
        config.start_policy = self.start_policy;
        if let Some(rule) = self.tie_break {
            config.tie_break = rule;
        }
        if let Some(eval) = self.eval {
            config.eval_mode = eval;
        }
        if let Some(schedule) = self.m_schedule {
            config.m_schedule = schedule;
        }
        if let Some(schedule) = self.delta_schedule {
            config.delta_schedule = schedule;
        }
        if let Some(lo) = self.lp_lower {
            config.lp_lower = lo;
        }
        if let Some(hi) = self.lp_upper {
            config.lp_upper = hi;
        }
        config.lp_weights = self.lp_weights;
        if let Some(region) = self.region {
            config.region = region;
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        config.out_summary = out_summary;
        config.out_trace = out_trace;
        config
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Model file to solve.
    #[arg(long)]
    model: PathBuf,
    /// Which solver to run.
    #[arg(long, value_enum)]
    algo: Algo,
    #[command(flatten)]
    config: ConfigArgs,
    /// Write the JSON summary here instead of standard output.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Write the iteration trace CSV here.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    config: ConfigArgs,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    model: PathBuf,
    /// Grid lower endpoint (applied at every non-stop state).
    #[arg(long, allow_negative_numbers = true)]
    lo: f64,
    /// Grid upper endpoint.
    #[arg(long, allow_negative_numbers = true)]
    hi: f64,
    /// Grid spacing.
    #[arg(long, allow_negative_numbers = true)]
    step: f64,
    #[command(flatten)]
    config: ConfigArgs,
    /// Write the per-point CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    model: PathBuf,
    /// Policy enumeration cap.
    #[arg(long, default_value_t = 1_000_000)]
    limit: u128,
    #[command(flatten)]
    config: ConfigArgs,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    model: PathBuf,
    /// Solver to feature in the bundle.
    #[arg(long, value_enum, default_value_t = Algo::Vi)]
    algo: Algo,
    /// Policy enumeration cap.
    #[arg(long, default_value_t = 1_000_000)]
    limit: u128,
    #[command(flatten)]
    config: ConfigArgs,
    /// Write the JSON bundle here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the featured solver's trace CSV here.
    #[arg(long)]
    trace: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            process::exit(EXIT_ERROR);
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Generate { builder } => {
            let (spec, out) = builder.split();
            let model = spec.build()?;
            let text = ModelFile::from_model(&model).to_json();
            match out {
                Some(path) => atomic_write(&path, text.as_bytes())?,
                None => print!("{text}"),
            }
            Ok(EXIT_CONVERGED)
        }
        Command::Solve(args) => {
            let (model, hash) = load_model(&args.model)?;
            let config = args.config.resolve(Some(args.algo), args.summary, args.trace);
            let output = run_solve(&model, &config, &hash)?;
            emit(&output, &config)?;
            Ok(output.exit_code)
        }
        Command::Classify(args) => {
            let (model, hash) = load_model(&args.model)?;
            let config = args.config.resolve(None, args.report, None);
            let output = run_classify(&model, &config, &hash)?;
            emit(&output, &config)?;
            Ok(output.exit_code)
        }
        Command::Scan(args) => {
            let (model, hash) = load_model(&args.model)?;
            let config = args.config.resolve(None, args.report, args.out);
            let output = run_scan(&model, &config, &hash, args.lo, args.hi, args.step)?;
            emit(&output, &config)?;
            Ok(output.exit_code)
        }
        Command::Oracle(args) => {
            let (model, hash) = load_model(&args.model)?;
            let config = args.config.resolve(None, args.report, None);
            let output = run_oracle(&model, &config, &hash, args.limit)?;
            emit(&output, &config)?;
            Ok(output.exit_code)
        }
        Command::Report(args) => {
            let (model, hash) = load_model(&args.model)?;
            let config = args.config.resolve(Some(args.algo), args.out, args.trace);
            let output = run_report(&model, &config, &hash, args.limit)?;
            emit(&output, &config)?;
            Ok(output.exit_code)
        }
    }
}

fn load_model(path: &Path) -> Result<(FiniteModel, String), CliError> {
    let bytes = std::fs::read(path)?;
    let text = String::from_utf8_lossy(&bytes);
    let file = ModelFile::parse_str(&text)?;
    Ok((file.to_model()?, content_hash(&bytes)))
}

fn emit(output: &VerbOutput, config: &ExperimentConfig) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(&output.report)?;
    text.push('\n');
    match &config.out_summary {
        Some(path) => atomic_write(path, text.as_bytes())?,
        None => print!("{text}"),
    }
    if let Some(path) = &config.out_trace {
        match &output.trace_csv {
            Some(csv) => atomic_write(path, csv.as_bytes())?,
            None => eprintln!("note: this run produces no iteration trace; trace file not written"),
        }
    }
    Ok(())
}
