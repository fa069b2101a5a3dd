//! Subcommands.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use tlscale_core::boundary::{check_constraints, BoundaryInputs, BoundaryReport, Condition, SearchRange, Winner};
use tlscale_core::distill::{distill_loss, distill_loss_grad, DistillConfig, KlDirection, LogitVector};
use tlscale_core::fitting::{FitConfig, FitProblem, FitResult, LawKind, ResidualMode, StartOutcome};
use tlscale_core::laws::Dataset;
use tlscale_core::planner::{self, ExperimentPlan, ModelSpec, SamplingPlan, SynthesisSpec};
use tlscale_core::{Law, LawInput, MetricKind, ModelSizeUnit};

use crate::curves::{self, SweepVar};
use crate::error::{CliError, CliResult, EXIT_INPUT, EXIT_NOT_CONVERGED};
use crate::format::{float, significant};
use crate::grid;
use crate::params::{self, FitRecord, ParamFile};

#[derive(Debug, Parser)]
#[command(name = "tlscale", version, about = "Fit, evaluate and compare transfer-learning scaling laws")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit a law to an observation grid and write a parameter file
    Fit(FitArgs),
    /// Evaluate a law at one point
    Predict(PredictArgs),
    /// Locate where distillation stops beating the baseline as pretraining data grows
    Boundary(BoundaryArgs),
    /// Check the parametric conditions between a baseline and a distilled law
    CheckConstraints(CheckArgs),
    /// Emit a prediction curve over a log-spaced sweep
    Curves(CurvesArgs),
    /// Emit the experiment grid (fractions x models x fractions)
    Plan(PlanArgs),
    /// Synthesize an observation grid from known parameters
    Synth(SynthArgs),
    /// Evaluate the distillation objective for one example
    DistillLoss(DistillArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LawArg {
    Baseline,
    Distilled,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MetricArg {
    Error,
    Loss,
}

impl From<MetricArg> for MetricKind {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Error => MetricKind::ErrorRate,
            MetricArg::Loss => MetricKind::CrossEntropyLoss,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum UnitArg {
    Raw,
    Millions,
    Heads,
}

impl From<UnitArg> for ModelSizeUnit {
    fn from(u: UnitArg) -> Self {
        match u {
            UnitArg::Raw => ModelSizeUnit::RawParamCount,
            UnitArg::Millions => ModelSizeUnit::MillionsOfParams,
            UnitArg::Heads => ModelSizeUnit::AttentionHeads,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ResidualArg {
    Absolute,
    Relative,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DirectionArg {
    /// KL(student || teacher)
    StudentTeacher,
    /// KL(teacher || student)
    TeacherStudent,
}

fn seed_parser() -> clap::builder::RangedU64ValueParser<u64> {
    clap::value_parser!(u64).range(0..=i64::MAX as u64)
}

#[derive(Debug, Args)]
struct FitArgs {
    /// Observation grid CSV (dataset,d_p,m,d_f,teacher,metric,value)
    #[arg(long)]
    input: PathBuf,
    /// Law to fit
    #[arg(long, value_enum, default_value = "baseline")]
    law: LawArg,
    /// Expected metric of the grid; a mismatch is an error
    #[arg(long, value_enum)]
    metric: Option<MetricArg>,
    /// Unit of the m and teacher columns, recorded in the parameter file
    #[arg(long, value_enum, default_value = "raw")]
    model_size_unit: UnitArg,
    /// Residual weighting
    #[arg(long, value_enum, default_value = "relative")]
    residual_mode: ResidualArg,
    /// Trial-step budget per start
    #[arg(long, default_value_t = 500)]
    max_iterations: usize,
    /// Gradient convergence tolerance
    #[arg(long, default_value_t = 1e-10)]
    gradient_tolerance: f64,
    /// Relative step convergence tolerance
    #[arg(long, default_value_t = 1e-12)]
    step_tolerance: f64,
    /// Number of multi-starts
    #[arg(long, default_value_t = 32)]
    starts: usize,
    /// Seed of the start generator (0 to 2^63-1)
    #[arg(long, default_value_t = 0, value_parser = seed_parser())]
    seed: u64,
    /// Worker threads for the starts (default: all cores); the result does not depend on it
    #[arg(long)]
    threads: Option<usize>,
    /// Output parameter file (TOML)
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct PredictArgs {
    /// Parameter file, or preset:<dataset>:<error|loss>
    #[arg(long)]
    params: String,
    /// Pretraining examples
    #[arg(long)]
    d_p: f64,
    /// Model size, in the parameter file's unit
    #[arg(long)]
    m: f64,
    /// Fine-tuning examples
    #[arg(long)]
    d_f: f64,
    /// Teacher size (required for distilled laws)
    #[arg(long)]
    teacher: Option<f64>,
}

#[derive(Debug, Args)]
struct BoundaryArgs {
    /// Baseline parameter file or preset
    #[arg(long)]
    baseline: String,
    /// Distilled parameter file (with scales)
    #[arg(long)]
    distilled: String,
    /// Student size
    #[arg(long)]
    m: f64,
    /// Fine-tuning examples
    #[arg(long)]
    d_f: f64,
    /// Teacher size
    #[arg(long)]
    teacher: f64,
    /// Lower end of the pretraining-size search range
    #[arg(long, default_value_t = 1e3)]
    lo: f64,
    /// Upper end of the pretraining-size search range
    #[arg(long, default_value_t = 1e9)]
    hi: f64,
    /// Relative root tolerance
    #[arg(long, default_value_t = tlscale_core::boundary::DEFAULT_ROOT_TOL)]
    tol: f64,
    /// Ratio tolerance of the lambda closeness checks
    #[arg(long, default_value_t = tlscale_core::boundary::DEFAULT_LAMBDA_TOLERANCE)]
    lambda_tolerance: f64,
    /// Write the full report as JSON
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Use the bundled error-rate presets of this dataset
    #[arg(long, conflicts_with_all = ["baseline", "distilled"])]
    dataset: Option<String>,
    /// Baseline parameter file or preset
    #[arg(long, requires = "distilled")]
    baseline: Option<String>,
    /// Distilled parameter file or preset; scales are optional
    #[arg(long, requires = "baseline")]
    distilled: Option<String>,
    /// Ratio tolerance of the lambda closeness checks
    #[arg(long, default_value_t = tlscale_core::boundary::DEFAULT_LAMBDA_TOLERANCE)]
    lambda_tolerance: f64,
}

#[derive(Debug, Args)]
struct CurvesArgs {
    /// Parameter file or preset
    #[arg(long)]
    params: String,
    /// Distilled parameter file; adds prediction_distilled and gap columns
    #[arg(long)]
    distilled: Option<String>,
    /// Variable to sweep
    #[arg(long, value_enum)]
    sweep: SweepVar,
    /// Fixed pretraining size (unless swept)
    #[arg(long)]
    d_p: Option<f64>,
    /// Fixed model size (unless swept)
    #[arg(long)]
    m: Option<f64>,
    /// Fixed fine-tuning size (unless swept)
    #[arg(long)]
    d_f: Option<f64>,
    /// Teacher size
    #[arg(long)]
    teacher: Option<f64>,
    /// Lower end of the sweep
    #[arg(long)]
    lo: f64,
    /// Upper end of the sweep
    #[arg(long)]
    hi: f64,
    /// Number of log-spaced points
    #[arg(long, default_value_t = 50)]
    points: usize,
    /// Output CSV (default: standard output)
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PlanOptions {
    /// Pretraining set size
    #[arg(long, default_value_t = planner::PRETRAINING_EXAMPLES)]
    upstream_size: u64,
    /// Pretraining class count
    #[arg(long, default_value_t = planner::PRETRAINING_CLASSES)]
    upstream_classes: u64,
    /// Downstream dataset (ImageNet100, TinyImageNet, CIFAR100, CIFAR10)
    #[arg(long, default_value = "ImageNet100")]
    downstream: String,
    /// Override the downstream training-set size
    #[arg(long)]
    downstream_size: Option<u64>,
    /// Override the downstream class count
    #[arg(long)]
    downstream_classes: Option<u64>,
    /// Sampling fractions, shared by both datasets
    #[arg(long, value_delimiter = ',', default_values_t = planner::DEFAULT_FRACTIONS)]
    fractions: Vec<f64>,
    /// Student head counts
    #[arg(long, value_delimiter = ',', default_values_t = planner::DEFAULT_HEADS)]
    heads: Vec<u32>,
    /// Width per head
    #[arg(long, default_value_t = 64)]
    head_dim: u32,
    /// Transformer blocks
    #[arg(long, default_value_t = 12)]
    depth: u32,
}

impl PlanOptions {
    fn downstream_dataset(&self) -> CliResult<Dataset> {
        Dataset::parse(&self.downstream).ok_or_else(|| CliError::input(format!("unknown dataset `{}`", self.downstream)))
    }

    fn build(&self) -> CliResult<ExperimentPlan> {
        let up = SamplingPlan::new(self.upstream_size, self.upstream_classes).with_fractions(self.fractions.clone());
        let mut down = SamplingPlan::downstream(self.downstream_dataset()?).with_fractions(self.fractions.clone());
        if let Some(s) = self.downstream_size {
            down.base_dataset_size = s;
        }
        if let Some(c) = self.downstream_classes {
            down.class_count = c;
        }
        Ok(planner::build_plan(&up, &down, &self.models())?)
    }

    fn models(&self) -> Vec<ModelSpec> {
        self.heads.iter().map(|&heads| ModelSpec { heads, head_dim: self.head_dim, depth: self.depth }).collect()
    }
}

#[derive(Debug, Args)]
struct PlanArgs {
    #[command(flatten)]
    plan: PlanOptions,
    /// Output CSV (default: standard output)
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Generating parameter file or preset
    #[arg(long)]
    params: String,
    #[command(flatten)]
    plan: PlanOptions,
    /// Teacher head counts; the grid is repeated once per teacher (distilled laws)
    #[arg(long, value_delimiter = ',')]
    teacher_heads: Vec<u32>,
    /// Divide each axis by its largest value in the plan
    #[arg(long)]
    normalize: bool,
    /// Relative standard deviation of the multiplicative Gaussian noise
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Seed of the noise stream (0 to 2^63-1)
    #[arg(long, default_value_t = 0, value_parser = seed_parser())]
    seed: u64,
    /// Dataset label written to every row (default: the downstream dataset)
    #[arg(long)]
    label: Option<String>,
    /// Output grid CSV
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct DistillArgs {
    /// Student logits, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    student: Vec<f64>,
    /// Teacher logits, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    teacher: Vec<f64>,
    /// Index of the true class
    #[arg(long)]
    label: usize,
    /// Weight of the cross-entropy term, in [0, 1]
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Softmax temperature
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    /// Direction of the KL term
    #[arg(long, value_enum, default_value = "student-teacher")]
    direction: DirectionArg,
    /// Also print the gradient with respect to the student logits
    #[arg(long)]
    grad: bool,
}

/// Parses `args` (including the program name) and runs the command. Returns
/// the exit status: 0 success, 1 input or usage error, 2 non-convergence.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind::{DisplayHelp, DisplayVersion};
            let text = e.render().to_string();
            return if matches!(e.kind(), DisplayHelp | DisplayVersion) {
                let _ = write!(out, "{text}");
                0
            } else {
                let _ = write!(err, "{text}");
                EXIT_INPUT
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Fit(a) => cmd_fit(a, out, err),
        Command::Predict(a) => cmd_predict(a, out, err),
        Command::Boundary(a) => cmd_boundary(a, out),
        Command::CheckConstraints(a) => cmd_check_constraints(a, out),
        Command::Curves(a) => cmd_curves(a, out),
        Command::Plan(a) => cmd_plan(a, out),
        Command::Synth(a) => cmd_synth(a, out),
        Command::DistillLoss(a) => cmd_distill_loss(a, out),
    }
}

fn write_or_print(path: Option<&PathBuf>, bytes: &[u8], out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::input(format!("{}: {e}", p.display()))),
        None => Ok(out.write_all(bytes)?),
    }
}

fn fit_config(a: &FitArgs) -> FitConfig {
    FitConfig {
        residual_mode: match a.residual_mode {
            ResidualArg::Absolute => ResidualMode::Absolute,
            ResidualArg::Relative => ResidualMode::Relative,
        },
        max_iterations: a.max_iterations,
        gradient_tolerance: a.gradient_tolerance,
        step_tolerance: a.step_tolerance,
        n_starts: a.starts,
        seed: a.seed,
        model_size_unit: a.model_size_unit.into(),
        ..FitConfig::default()
    }
}

/// Runs every start on the rayon pool; the selection is order independent.
pub fn fit_parallel(problem: &FitProblem, threads: Option<usize>) -> CliResult<FitResult> {
    let starts = problem.config().n_starts;
    let run = || (0..starts).into_par_iter().map(|s| problem.run_start(s)).collect::<Vec<StartOutcome>>();
    let outcomes = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::input(e.to_string()))?
            .install(run),
        None => run(),
    };
    Ok(problem.finish(&outcomes)?)
}

fn cmd_fit(a: FitArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let grid = grid::read_path(&a.input)?;
    if let Some(m) = a.metric {
        let wanted = MetricKind::from(m);
        if wanted != grid.metric() {
            return Err(CliError::input(format!(
                "grid metric is `{}` but --metric {} was given",
                grid.metric().as_str(),
                wanted.as_str()
            )));
        }
    }
    let config = fit_config(&a);
    let kind = match a.law {
        LawArg::Baseline => LawKind::Baseline,
        LawArg::Distilled => LawKind::Distilled,
    };
    let problem = FitProblem::new(&grid, kind, config)?;
    let fit = fit_parallel(&problem, a.threads)?;

    let mut file = ParamFile::from_law(&fit.params);
    file.provenance = Some(format!("fit to {} ({} rows)", grid.dataset_label(), grid.len()));
    file.fit = Some(FitRecord {
        sse: fit.sse,
        rmse: fit.rmse,
        converged: fit.converged,
        seed: config.seed,
        start_index: fit.start_index,
        n_iterations: fit.n_iterations,
    });
    params::save(&file, &a.output)?;

    if fit.diagnostics.degenerate {
        writeln!(err, "warning: all observed values are identical; the fit is degenerate")?;
    }
    for c in &fit.diagnostics.unidentifiable {
        writeln!(err, "warning: constant column makes {} not separately identifiable", c.unidentifiable_pair())?;
    }
    if !fit.diagnostics.abandoned_starts.is_empty() {
        writeln!(err, "warning: abandoned starts {:?} (non-finite initial residual)", fit.diagnostics.abandoned_starts)?;
    }
    writeln!(
        out,
        "rmse={} converged={} seed={} start={} iterations={}",
        significant(fit.rmse, 6),
        fit.converged,
        config.seed,
        fit.start_index,
        fit.n_iterations
    )?;
    Ok(if fit.converged { 0 } else { EXIT_NOT_CONVERGED })
}

fn cmd_predict(a: PredictArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let law = params::load(&a.params)?.to_law()?;
    let input = LawInput { d_p: a.d_p, m: a.m, d_f: a.d_f, teacher: a.teacher };
    let eval = law.evaluate(&input)?;
    writeln!(out, "{}", significant(eval.value, 10))?;
    if eval.exceeds_unit_error {
        writeln!(err, "warning: predicted error rate {} exceeds 1", significant(eval.value, 10))?;
    }
    Ok(0)
}

#[derive(Serialize)]
struct BoundaryDocument<'a> {
    m: f64,
    d_f: f64,
    teacher: f64,
    range: SearchRange,
    tol: f64,
    baseline: &'a ParamFile,
    distilled: &'a ParamFile,
    report: &'a BoundaryReport,
}

fn winner_name(w: Winner) -> &'static str {
    match w {
        Winner::Distilled => "distilled",
        Winner::Baseline => "baseline",
    }
}

fn cmd_boundary(a: BoundaryArgs, out: &mut dyn Write) -> CliResult<i32> {
    let baseline_file = params::load(&a.baseline)?;
    let distilled_file = params::load(&a.distilled)?;
    let inputs = BoundaryInputs::new(baseline_file.to_baseline()?, distilled_file.to_distilled()?, a.m, a.d_f, a.teacher)?;
    let range = SearchRange::new(a.lo, a.hi)?;
    let report = inputs.analyze(range, a.tol, a.lambda_tolerance)?;

    writeln!(out, "delta = {}", significant(report.delta.total, 10))?;
    match &report.stationary {
        Some(s) => writeln!(
            out,
            "stationary point D_p* = {} (local maximum: {})",
            significant(s.d_p, 10),
            if s.is_max { "yes" } else { "no" }
        )?,
        None => writeln!(out, "stationary point D_p* = none")?,
    }
    match &report.crossover.crossing {
        Some(c) => writeln!(out, "crossover D_p** = {}", significant(c.d_p, 10))?,
        None => writeln!(out, "crossover D_p** = none ({})", report.crossover.profile.label())?,
    }
    writeln!(out, "{:<18} {:<18} winner", "from", "to")?;
    for r in &report.regimes {
        writeln!(out, "{:<18} {:<18} {}", significant(r.lo, 10), significant(r.hi, 10), winner_name(r.winner))?;
    }

    if let Some(path) = &a.output {
        let doc = BoundaryDocument {
            m: a.m,
            d_f: a.d_f,
            teacher: a.teacher,
            range,
            tol: a.tol,
            baseline: &baseline_file,
            distilled: &distilled_file,
            report: &report,
        };
        let mut json = serde_json::to_string_pretty(&doc).map_err(|e| CliError::input(e.to_string()))?;
        json.push('\n');
        write_or_print(Some(path), json.as_bytes(), out)?;
    }
    Ok(0)
}

fn condition_line(out: &mut dyn Write, name: &str, c: &Condition, value_name: &str) -> CliResult<()> {
    let status = match c.satisfied {
        Some(true) => "satisfied",
        Some(false) => "violated",
        None => "not evaluable",
    };
    match c.value {
        Some(v) => writeln!(out, "{name:<26} {status:<14} {value_name} = {}", significant(v, 6))?,
        None => writeln!(out, "{name:<26} {status}")?,
    }
    Ok(())
}

fn cmd_check_constraints(a: CheckArgs, out: &mut dyn Write) -> CliResult<i32> {
    let (baseline, distilled) = match (&a.dataset, &a.baseline, &a.distilled) {
        (Some(d), _, _) => (format!("preset:{d}:error"), format!("preset:{d}:distilled")),
        (None, Some(b), Some(d)) => (b.clone(), d.clone()),
        _ => return Err(CliError::input("give --dataset, or both --baseline and --distilled")),
    };
    let baseline = params::load(&baseline)?.to_baseline()?;
    let distilled = params::load(&distilled)?.to_distilled_coefficients()?;
    let r = check_constraints(&baseline, &distilled, a.lambda_tolerance)?;
    condition_line(out, "E < E'", &r.e_ordering, "E' - E")?;
    condition_line(out, "gamma > gamma'", &r.gamma_ordering, "gamma - gamma'")?;
    condition_line(out, "beta < beta'", &r.beta_ordering, "beta' - beta")?;
    condition_line(out, "alpha - alpha' in (-1, 0)", &r.alpha_gap_in_range, "alpha - alpha'")?;
    condition_line(out, "lambda_m ~ lambda_m'", &r.lambda_m_close, "lambda_m / lambda_m'")?;
    condition_line(out, "lambda_f ~ lambda_f'", &r.lambda_f_close, "lambda_f / lambda_f'")?;
    writeln!(out, "all evaluable conditions satisfied: {}", if r.all_satisfied { "yes" } else { "no" })?;
    Ok(0)
}

fn cmd_curves(a: CurvesArgs, out: &mut dyn Write) -> CliResult<i32> {
    let primary = params::load(&a.params)?.to_law()?;
    let distilled = a.distilled.as_deref().map(|p| params::load(p)?.to_law()).transpose()?;
    let fixed = |v: Option<f64>, flag: &str, var: SweepVar| -> CliResult<f64> {
        match v {
            Some(v) => Ok(v),
            None if a.sweep == var => Ok(1.0),
            None => Err(CliError::input(format!("--{flag} is required when sweeping {}", a.sweep.name()))),
        }
    };
    let input = LawInput {
        d_p: fixed(a.d_p, "d-p", SweepVar::Dp)?,
        m: fixed(a.m, "m", SweepVar::M)?,
        d_f: fixed(a.d_f, "d-f", SweepVar::Df)?,
        teacher: a.teacher,
    };
    let values = curves::log_space(a.lo, a.hi, a.points)?;
    let rows = curves::sweep(&primary, distilled.as_ref(), a.sweep, input, &values)?;
    let mut buf = Vec::new();
    curves::write(a.sweep, &rows, &mut buf)?;
    write_or_print(a.output.as_ref(), &buf, out)?;
    Ok(0)
}

fn cmd_plan(a: PlanArgs, out: &mut dyn Write) -> CliResult<i32> {
    let plan = a.plan.build()?;
    let io = |e: csv::Error| CliError::input(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["upstream_fraction", "d_p", "heads", "head_dim", "depth", "params", "downstream_fraction", "d_f"])
        .map_err(io)?;
    for r in &plan.rows {
        w.write_record([
            float(r.upstream_fraction),
            r.d_p.to_string(),
            r.model.heads.to_string(),
            r.model.head_dim.to_string(),
            r.model.depth.to_string(),
            r.model.param_estimate().to_string(),
            float(r.downstream_fraction),
            r.d_f.to_string(),
        ])
        .map_err(io)?;
    }
    let buf = w.into_inner().map_err(|e| CliError::input(e.to_string()))?;
    write_or_print(a.output.as_ref(), &buf, out)?;
    Ok(0)
}

fn cmd_synth(a: SynthArgs, out: &mut dyn Write) -> CliResult<i32> {
    let generator = params::load(&a.params)?.to_law()?;
    let plan = a.plan.build()?;
    let unit = generator.base().model_size_unit;
    let teachers: Vec<Option<ModelSpec>> = match generator {
        Law::Baseline(_) => {
            if !a.teacher_heads.is_empty() {
                return Err(CliError::input("--teacher-heads applies to distilled laws only"));
            }
            vec![None]
        }
        Law::Distilled(_) => {
            if a.teacher_heads.is_empty() {
                return Err(CliError::input("distilled generators need --teacher-heads"));
            }
            a.teacher_heads
                .iter()
                .map(|&heads| Some(ModelSpec { heads, head_dim: a.plan.head_dim, depth: a.plan.depth }))
                .collect()
        }
    };
    let mut inputs = Vec::new();
    for t in &teachers {
        inputs.extend(plan.law_inputs(unit, t.as_ref()));
    }
    if a.normalize {
        normalize(&mut inputs);
    }
    let label = match a.label {
        Some(l) => l,
        None => a.plan.downstream_dataset()?.name().to_string(),
    };
    let spec = SynthesisSpec { generator, grid: inputs, noise_sigma_relative: a.noise, seed: a.seed, dataset_label: label };
    let grid = planner::synthesize(&spec)?;
    grid::write_path(&grid, &a.output)?;
    writeln!(out, "wrote {} rows to {}", grid.len(), a.output.display())?;
    Ok(0)
}

/// Divides each axis by its largest value; teachers share the student scale.
fn normalize(inputs: &mut [LawInput]) {
    let max = |f: fn(&LawInput) -> f64| inputs.iter().map(f).fold(0.0, f64::max);
    let (dp, m, df) = (max(|i| i.d_p), max(|i| i.m), max(|i| i.d_f));
    for i in inputs {
        i.d_p /= dp;
        i.m /= m;
        i.d_f /= df;
        i.teacher = i.teacher.map(|t| t / m);
    }
}

fn cmd_distill_loss(a: DistillArgs, out: &mut dyn Write) -> CliResult<i32> {
    let student = LogitVector::new(a.student)?;
    let teacher = LogitVector::new(a.teacher)?;
    let direction = match a.direction {
        DirectionArg::StudentTeacher => KlDirection::StudentTeacher,
        DirectionArg::TeacherStudent => KlDirection::TeacherStudent,
    };
    let config = DistillConfig::new(a.alpha, a.tau)?.with_direction(direction);
    let loss = distill_loss(&student, &teacher, a.label, &config)?;
    writeln!(out, "total={}", float(loss.total))?;
    writeln!(out, "cross_entropy={}", float(loss.cross_entropy))?;
    writeln!(out, "kl={}", float(loss.kl))?;
    if a.grad {
        let g = distill_loss_grad(&student, &teacher, a.label, &config)?;
        writeln!(out, "grad={}", g.iter().map(|&v| float(v)).collect::<Vec<_>>().join(","))?;
    }
    Ok(0)
}

