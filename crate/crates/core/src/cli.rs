//! Command-line harness. Every subcommand is a pure function of its input
//! files, flags, and seed.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::assign::{assign_classes, assignment_error_bound, evaluate, RiskReport};
use crate::data::{
    make_all_ordered_pairs, make_pairs, parse_libsvm, parse_pair_csv, sample_gaussian, split_pairs, write_libsvm,
    write_pair_csv, GaussianMixtureSpec, RngSeed,
};
use crate::error::{Error, Result};
use crate::model::{parse_model, write_model, LossKind, SignedClassifier};
use crate::risk::{pairwise_surrogate_risk, ClassPrior};
use crate::sweep::{
    default_priors, sweep_assignment, sweep_prior, write_assignment_csv, write_prior_csv, AssignmentSweep, Method,
    PriorSweep, DEFAULT_M_PRIMES, DEFAULT_THETAS,
};
use crate::train::{train_sgd, train_unhinged_closed_form, write_trace, Objective, TrainConfig, TrainingData};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_BALANCED_PRIOR: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

pub const THREADS_ENV: &str = "PAIRELICIT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "pairelicit", version, about = "Binary classification from pairwise similarity labels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample labeled 1-D points from the Gaussian mixture (LIBSVM output).
    Synth(SynthArgs),
    /// Couple labeled points into pairs that keep only tau = y * y'.
    Pairs(PairsArgs),
    /// Split pairs into a training part and an assignment part.
    Split(SplitArgs),
    /// Fit a linear model (stage 1).
    Train(TrainArgs),
    /// Choose the class assignment from held-out pairs and the prior (stage 2).
    Assign(AssignArgs),
    /// Pointwise, clustering, and all-pairs pairwise error on labeled data.
    Eval(EvalArgs),
    /// Monte Carlo assignment failure rate against its exponential bound.
    SweepAssignment(SweepAssignmentArgs),
    /// Clustering error of CIPS, SD, and supervised training across priors.
    SweepPrior(SweepPriorArgs),
    /// Evaluate the assignment error bound.
    Bound(BoundArgs),
}

#[derive(Debug, Args)]
struct MixtureArgs {
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    mu_pos: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma_pos: f64,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    mu_neg: f64,
    #[arg(long, default_value_t = 2.0)]
    sigma_neg: f64,
}

impl MixtureArgs {
    fn spec(&self, prior: f64) -> Result<GaussianMixtureSpec> {
        GaussianMixtureSpec::new(self.mu_pos, self.sigma_pos, self.mu_neg, self.sigma_neg, prior)
    }
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[command(flatten)]
    mixture: MixtureArgs,
    /// Positive class prior.
    #[arg(long, default_value_t = 0.5)]
    prior: f64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PairsArgs {
    /// Labeled LIBSVM input.
    #[arg(long)]
    input: PathBuf,
    /// Number of pairs, drawn with replacement.
    #[arg(long, required_unless_present = "all_ordered")]
    m: Option<usize>,
    /// Emit all n^2 ordered pairs instead of sampling.
    #[arg(long, conflicts_with = "m")]
    all_ordered: bool,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SplitArgs {
    #[arg(long)]
    input: PathBuf,
    /// Fraction of pairs kept for training.
    #[arg(long, default_value_t = 0.9)]
    ratio: f64,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_train: PathBuf,
    #[arg(long)]
    out_assign: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum ObjectiveName {
    Cips,
    Sd,
    Mcl,
    Supervised,
}

fn parse_loss(s: &str) -> std::result::Result<LossKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args)]
struct OptimizerArgs {
    #[arg(long, default_value_t = 1e-2)]
    lr: f64,
    #[arg(long, default_value_t = 64)]
    batch_size: usize,
    #[arg(long, default_value_t = 500)]
    epochs: usize,
    #[arg(long, default_value_t = 1e-4)]
    l2: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl OptimizerArgs {
    fn config(&self, objective: Objective) -> TrainConfig {
        TrainConfig {
            learning_rate: self.lr,
            batch_size: self.batch_size,
            epochs: self.epochs,
            l2: self.l2,
            seed: RngSeed(self.seed),
            objective,
        }
    }
}

#[derive(Debug, Args)]
struct TrainArgs {
    /// Pair CSV, or labeled LIBSVM for `--objective supervised`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = ObjectiveName::Cips)]
    objective: ObjectiveName,
    #[arg(long, default_value = "logistic", value_parser = parse_loss)]
    loss: LossKind,
    /// Class prior, required by `--objective sd`.
    #[arg(long)]
    prior: Option<f64>,
    /// Exact unhinged solution (requires cips with the unhinged loss).
    #[arg(long)]
    closed_form: bool,
    #[command(flatten)]
    optimizer: OptimizerArgs,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    /// Objective trace CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AssignArgs {
    #[arg(long)]
    model: PathBuf,
    /// Held-out pair CSV.
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long)]
    prior: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    /// Labeled LIBSVM test data.
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepAssignmentArgs {
    #[command(flatten)]
    mixture: MixtureArgs,
    #[arg(long, default_value_t = 0.1)]
    prior: f64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    thetas: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    m_primes: Option<Vec<usize>>,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepPriorArgs {
    #[command(flatten)]
    mixture: MixtureArgs,
    #[arg(long, value_delimiter = ',')]
    priors: Option<Vec<f64>>,
    #[arg(long, default_value_t = 4000)]
    m: usize,
    #[arg(long, value_delimiter = ',', value_parser = parse_method)]
    methods: Option<Vec<Method>>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value = "logistic", value_parser = parse_loss)]
    loss: LossKind,
    #[command(flatten)]
    optimizer: OptimizerArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[arg(long)]
    prior: f64,
    /// Number of assignment pairs.
    #[arg(long)]
    m2: usize,
    /// Pointwise error of the classifier.
    #[arg(long)]
    r_point: f64,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => write_file(path, text),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|source| Error::Io { path: PathBuf::from("<stdout>"), source }),
    }
}

fn cmd_synth(a: &SynthArgs, stdout: &mut dyn Write) -> Result<()> {
    let spec = a.mixture.spec(a.prior)?;
    let data = sample_gaussian(&spec, a.n, RngSeed(a.seed))?;
    emit(a.out.as_deref(), &write_libsvm(&data), stdout)
}

fn cmd_pairs(a: &PairsArgs, stdout: &mut dyn Write) -> Result<()> {
    let data = parse_libsvm(&read(&a.input)?, a.dim)?;
    let pairs = match a.m {
        Some(m) => make_pairs(&data, m, RngSeed(a.seed))?,
        None => make_all_ordered_pairs(&data)?,
    };
    emit(a.out.as_deref(), &write_pair_csv(&pairs), stdout)
}

fn cmd_split(a: &SplitArgs) -> Result<()> {
    let pairs = parse_pair_csv(&read(&a.input)?, a.dim)?;
    let (d1, d2) = split_pairs(&pairs, a.ratio, RngSeed(a.seed))?;
    write_file(&a.out_train, &write_pair_csv(&d1))?;
    write_file(&a.out_assign, &write_pair_csv(&d2))
}

fn cmd_train(a: &TrainArgs) -> Result<()> {
    if a.closed_form && (a.objective != ObjectiveName::Cips || a.loss != LossKind::Unhinged) {
        return Err(Error::invalid("--closed-form requires --objective cips --loss unhinged"));
    }
    let text = read(&a.input)?;
    let (model, trace) = if a.objective == ObjectiveName::Supervised {
        let data = parse_libsvm(&text, a.dim)?;
        let cfg = a.optimizer.config(Objective::Supervised(a.loss));
        let out = train_sgd(TrainingData::Points(&data), &cfg, data.dim())?;
        (out.model, out.trace)
    } else {
        let pairs = parse_pair_csv(&text, a.dim)?;
        if a.closed_form {
            let model = train_unhinged_closed_form(&pairs)?;
            let risk = pairwise_surrogate_risk(&model, &pairs, LossKind::Unhinged)?;
            (model, vec![risk])
        } else {
            let objective = match a.objective {
                ObjectiveName::Cips => Objective::Cips(a.loss),
                ObjectiveName::Mcl => Objective::Mcl,
                ObjectiveName::Sd => {
                    let p = a.prior.ok_or_else(|| Error::invalid("--objective sd needs --prior"))?;
                    Objective::Sd { kind: a.loss, prior: ClassPrior::new(p)? }
                }
                ObjectiveName::Supervised => unreachable!(),
            };
            let out = train_sgd(TrainingData::Pairs(&pairs), &a.optimizer.config(objective), pairs.dim())?;
            (out.model, out.trace)
        }
    };
    write_file(&a.out, &write_model(&model, None))?;
    if let Some(path) = &a.trace {
        write_file(path, &write_trace(&trace))?;
    }
    Ok(())
}

fn cmd_assign(a: &AssignArgs, stdout: &mut dyn Write) -> Result<()> {
    let prior = ClassPrior::new(a.prior)?;
    if prior.is_balanced() {
        return Err(Error::BalancedPrior("class assignment"));
    }
    let (model, _) = parse_model(&read(&a.model)?)?;
    let d2 = parse_pair_csv(&read(&a.pairs)?, Some(model.dim()))?;
    let signed = assign_classes(&model, &d2, prior)?;
    emit(a.out.as_deref(), &write_model(&signed.model, Some(signed.assignment)), stdout)
}

fn cmd_eval(a: &EvalArgs, stdout: &mut dyn Write) -> Result<()> {
    let (model, assignment) = parse_model(&read(&a.model)?)?;
    let data = parse_libsvm(&read(&a.data)?, Some(model.dim()))?;
    let clf = SignedClassifier::new(model, assignment.unwrap_or(crate::data::Label::Positive));
    let report = evaluate(&clf, &data)?;
    let text = format!("{}\n{}\n", RiskReport::CSV_HEADER, report.csv_row());
    emit(a.out.as_deref(), &text, stdout)
}

fn cmd_sweep_assignment(a: &SweepAssignmentArgs, stdout: &mut dyn Write) -> Result<()> {
    let cfg = AssignmentSweep {
        spec: a.mixture.spec(a.prior)?,
        thetas: a.thetas.clone().unwrap_or_else(|| DEFAULT_THETAS.to_vec()),
        m_primes: a.m_primes.clone().unwrap_or_else(|| DEFAULT_M_PRIMES.to_vec()),
        trials: a.trials,
        seed: RngSeed(a.seed),
    };
    let cells = sweep_assignment(&cfg)?;
    emit(a.out.as_deref(), &write_assignment_csv(&cells), stdout)
}

fn cmd_sweep_prior(a: &SweepPriorArgs, stdout: &mut dyn Write) -> Result<()> {
    let cfg = PriorSweep {
        base: a.mixture.spec(0.5)?,
        priors: a.priors.clone().unwrap_or_else(default_priors),
        m: a.m,
        methods: a.methods.clone().unwrap_or_else(|| Method::ALL.to_vec()),
        trials: a.trials,
        loss: a.loss,
        train: a.optimizer.config(Objective::Cips(a.loss)),
    };
    let cells = sweep_prior(&cfg)?;
    emit(a.out.as_deref(), &write_prior_csv(&cells), stdout)
}

fn cmd_bound(a: &BoundArgs, stdout: &mut dyn Write) -> Result<()> {
    let b = assignment_error_bound(ClassPrior::new(a.prior)?, a.m2, a.r_point)?;
    emit(None, &format!("{b}\n"), stdout)
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::BalancedPrior(_) => EXIT_BALANCED_PRIOR,
        Error::NonFinite { .. } | Error::NotConverged { .. } => EXIT_NUMERIC,
        Error::InvalidArgument(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn configure_threads() -> std::result::Result<(), String> {
    let Some(raw) = std::env::var_os(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .to_str()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer"))?;
    // A pool built earlier in this process wins; that only happens in tests.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `args` (including the program name), runs the subcommand, and
/// returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        let _ = writeln!(stderr, "error: {msg}");
        return EXIT_USAGE;
    }
    let result = match &cli.command {
        Command::Synth(a) => cmd_synth(a, stdout),
        Command::Pairs(a) => cmd_pairs(a, stdout),
        Command::Split(a) => cmd_split(a),
        Command::Train(a) => cmd_train(a),
        Command::Assign(a) => cmd_assign(a, stdout),
        Command::Eval(a) => cmd_eval(a, stdout),
        Command::SweepAssignment(a) => cmd_sweep_assignment(a, stdout),
        Command::SweepPrior(a) => cmd_sweep_prior(a, stdout),
        Command::Bound(a) => cmd_bound(a, stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
