//! Nonlinear least-squares fitting of the scaling laws.
//!
//! Parameters are optimized in an unconstrained log space:
//!
//! | index | meaning                    |
//! |-------|----------------------------|
//! | 0     | `ln E_inf`                 |
//! | 1, 2  | `ln alpha`, `ln(1/l_p)`    |
//! | 3, 4  | `ln beta`,  `ln(1/l_m)`    |
//! | 5, 6  | `ln gamma`, `ln(1/l_f)`    |
//! | 7, 8  | `ln eta`,   `ln(1/delta)`  (distilled only) |
//!
//! so exponents and scales are always positive. Below `ln 1e-30` the
//! asymptote takes an exact-zero branch with zero gradient. Each power term
//! is formed as `exp(ln a - e ln x)` and flushed to zero below `1e-300`.
//!
//! Every start runs Levenberg-Marquardt with Marquardt diagonal scaling and
//! the analytic Jacobian. A step is scaled down so that no coordinate moves
//! by more than 2 (a factor e^2), and the Marquardt diagonal is floored at
//! `1e-10` of its largest entry; together these keep a single Gauss-Newton step from
//! collapsing a term to zero where its gradient vanishes. The winner is the lowest SSE, with ties going to
//! the lowest start index. Starts are independent
//! ([`FitProblem::run_start`]), so they may be evaluated in any order or in
//! parallel and [`FitProblem::finish`] still returns the same result.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::laws::{BaselineLawParams, DistilledLawParams, Law, LawInput, MetricKind, ModelSizeUnit};
use crate::math::{exp, ln, sqrt, FLUSH_THRESHOLD};

/// `ln(1e-30)`: below this the asymptote is exactly zero.
const ZERO_BRANCH_LOG: f64 = -69.077_552_789_821_37;
const INITIAL_DAMPING: f64 = 1e-3;
const MIN_DAMPING: f64 = 1e-12;
const MAX_DAMPING: f64 = 1e12;
/// Largest change of any log coordinate in one step.
const MAX_LOG_STEP: f64 = 2.0;
/// Marquardt scaling floor, relative to the largest diagonal entry.
const DIAG_FLOOR: f64 = 1e-10;
/// Internal coordinates stay within `[-BOUND, BOUND]` so `exp` stays normal.
const COORDINATE_BOUND: f64 = 690.0;
/// Asymptotes below this count as zero when comparing fits.
pub const EFFECTIVELY_ZERO_ASYMPTOTE: f64 = 1e-8;

/// One measured grid cell.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Observation {
    /// Pretraining example count.
    pub d_p: f64,
    /// Student model size.
    pub m: f64,
    /// Fine-tuning example count.
    pub d_f: f64,
    /// Teacher size, distilled runs only.
    pub teacher: Option<f64>,
    /// What `value` measures.
    pub metric: MetricKind,
    /// Observed error rate (in `(0, 1]`) or loss (`> 0`).
    pub value: f64,
}

impl Observation {
    /// The law input of this row.
    pub fn input(&self) -> LawInput {
        LawInput { d_p: self.d_p, m: self.m, d_f: self.d_f, teacher: self.teacher }
    }

    fn validate(&self, row: usize) -> Result<()> {
        let bad = |reason| Err(Error::InvalidObservation { row, reason });
        if self.input().validate().is_err() {
            return bad("sizes must be strictly positive and finite");
        }
        if !(self.value > 0.0 && self.value.is_finite()) {
            return bad("value must be strictly positive and finite");
        }
        if self.metric == MetricKind::ErrorRate && self.value > 1.0 {
            return bad("error rate above 1");
        }
        Ok(())
    }
}

/// Observations of a single metric on one dataset.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ObservationGrid {
    rows: Vec<Observation>,
    dataset_label: alloc::string::String,
}

impl ObservationGrid {
    /// Validates every row and requires one shared metric.
    pub fn new(dataset_label: impl Into<alloc::string::String>, rows: Vec<Observation>) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyGrid)?;
        for (i, r) in rows.iter().enumerate() {
            r.validate(i)?;
            if r.metric != first.metric {
                return Err(Error::MixedMetrics);
            }
        }
        Ok(Self { rows, dataset_label: dataset_label.into() })
    }

    /// The rows.
    pub fn rows(&self) -> &[Observation] {
        &self.rows
    }

    /// Shared metric.
    pub fn metric(&self) -> MetricKind {
        self.rows[0].metric
    }

    /// Dataset label.
    pub fn dataset_label(&self) -> &str {
        &self.dataset_label
    }

    /// Row count.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// Never true for a constructed grid.
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// How residuals are weighted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ResidualMode {
    /// `pred - value`.
    Absolute,
    /// `(pred - value) / value`.
    #[default]
    Relative,
}

/// Which law to fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum LawKind {
    /// Seven free parameters.
    Baseline,
    /// Nine free parameters.
    Distilled,
}

impl LawKind {
    /// Free parameter count.
    pub fn n_params(self) -> usize {
        match self {
            LawKind::Baseline => 7,
            LawKind::Distilled => 9,
        }
    }

    /// Minimum grid rows.
    pub fn min_rows(self) -> usize {
        self.n_params() + 1
    }
}

/// A closed interval in log space.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LogRange {
    /// Lower end (a logarithm).
    pub lo: f64,
    /// Upper end (a logarithm).
    pub hi: f64,
}

impl LogRange {
    /// `[ln lo, ln hi]` from linear endpoints.
    pub fn from_linear(lo: f64, hi: f64) -> Self {
        Self { lo: ln(lo), hi: ln(hi) }
    }
}

/// Fitting options.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FitConfig {
    /// Residual weighting.
    pub residual_mode: ResidualMode,
    /// Trial-step budget per start.
    pub max_iterations: usize,
    /// Converged once `max |J^T r| <= gradient_tolerance`.
    pub gradient_tolerance: f64,
    /// Converged once `|step| <= step_tolerance * (|u| + step_tolerance)`.
    pub step_tolerance: f64,
    /// Number of multi-starts.
    pub n_starts: usize,
    /// Seed of the start generator.
    pub seed: u64,
    /// Log-uniform range of initial exponents.
    pub exponent_init_range: LogRange,
    /// Log-uniform range of initial scales `l`, relative to the median observation.
    pub scale_init_range: LogRange,
    /// Unit recorded on the fitted law.
    pub model_size_unit: ModelSizeUnit,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            residual_mode: ResidualMode::Relative,
            max_iterations: 500,
            gradient_tolerance: 1e-10,
            step_tolerance: 1e-12,
            n_starts: 32,
            seed: 0,
            exponent_init_range: LogRange::from_linear(0.05, 12.0),
            scale_init_range: LogRange::from_linear(1e-7, 1e2),
            model_size_unit: ModelSizeUnit::RawParamCount,
        }
    }
}

impl FitConfig {
    /// Checks tolerances, counts and ranges.
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1"));
        }
        if !(self.gradient_tolerance > 0.0) || !(self.step_tolerance > 0.0) {
            return Err(Error::InvalidConfig("tolerances must be positive"));
        }
        if self.n_starts == 0 {
            return Err(Error::InvalidConfig("n_starts must be at least 1"));
        }
        for r in [self.exponent_init_range, self.scale_init_range] {
            if !(r.lo <= r.hi) || !r.lo.is_finite() || !r.hi.is_finite() {
                return Err(Error::InvalidConfig("initialization ranges must be finite and nonempty"));
            }
        }
        Ok(())
    }
}

/// An input column of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Column {
    /// Pretraining size.
    DP,
    /// Model size.
    M,
    /// Fine-tuning size.
    DF,
    /// Teacher size.
    Teacher,
}

impl Column {
    /// The coefficient pair a constant column cannot separate.
    pub fn unidentifiable_pair(self) -> &'static str {
        match self {
            Column::DP => "alpha and lambda_p",
            Column::M => "beta and lambda_m",
            Column::DF => "gamma and lambda_f",
            Column::Teacher => "eta and delta",
        }
    }
}

/// Warnings attached to a fit.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FitDiagnostics {
    /// All observed values are identical; the asymptote alone explains them.
    pub degenerate: bool,
    /// Constant regressors: only the product `x^-e / l` at that value is pinned.
    pub unidentifiable: Vec<Column>,
    /// Starts abandoned because their initial residual was not finite.
    pub abandoned_starts: Vec<usize>,
}

/// The local run from one start.
#[derive(Debug, Clone, PartialEq)]
pub struct StartOutcome {
    /// Start index.
    pub start_index: usize,
    /// Final internal parameter vector.
    pub point: Vec<f64>,
    /// Final sum of squared residuals (`inf` if abandoned).
    pub sse: f64,
    /// Trial steps taken.
    pub n_iterations: usize,
    /// A tolerance was met.
    pub converged: bool,
    /// The initial residual was not finite.
    pub abandoned: bool,
    /// SSE after the start point and after each accepted step.
    pub trace: Vec<f64>,
}

/// Outcome of a multi-start fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Fitted coefficients.
    pub params: Law,
    /// Sum of squared residuals in the configured mode.
    pub sse: f64,
    /// `sqrt(sse / rows)`.
    pub rmse: f64,
    /// Trial steps of the winning start.
    pub n_iterations: usize,
    /// Whether the winning start met a tolerance.
    pub converged: bool,
    /// Index of the winning start.
    pub start_index: usize,
    /// Residuals of the winner, in row order.
    pub residuals: Vec<f64>,
    /// Internal (log-space) parameters of the winner.
    pub point: Vec<f64>,
    /// Warnings.
    pub diagnostics: FitDiagnostics,
}

impl FitResult {
    /// Asymptote below [`EFFECTIVELY_ZERO_ASYMPTOTE`].
    pub fn asymptote_is_effectively_zero(&self) -> bool {
        self.params.base().asymptote < EFFECTIVELY_ZERO_ASYMPTOTE
    }
}

#[derive(Debug, Clone, Copy)]
struct Row {
    logs: [f64; 4],
    value: f64,
    weight: f64,
}

/// A validated least-squares problem: grid, law kind and configuration.
#[derive(Debug, Clone)]
pub struct FitProblem {
    kind: LawKind,
    metric: MetricKind,
    config: FitConfig,
    rows: Vec<Row>,
    min_value: f64,
    median_value: f64,
    diagnostics: FitDiagnostics,
}

impl FitProblem {
    /// Checks the grid against `kind` and precomputes the row logarithms.
    pub fn new(grid: &ObservationGrid, kind: LawKind, config: FitConfig) -> Result<Self> {
        config.validate()?;
        if grid.len() < kind.min_rows() {
            return Err(Error::TooFewRows { rows: grid.len(), required: kind.min_rows() });
        }
        let mut rows = Vec::with_capacity(grid.len());
        for (i, o) in grid.rows().iter().enumerate() {
            let teacher = match (kind, o.teacher) {
                (LawKind::Distilled, None) => return Err(Error::MissingTeacherRow { row: i }),
                (LawKind::Distilled, Some(t)) => ln(t),
                (LawKind::Baseline, _) => 0.0,
            };
            let weight = match config.residual_mode {
                ResidualMode::Absolute => 1.0,
                ResidualMode::Relative => 1.0 / o.value,
            };
            rows.push(Row { logs: [ln(o.d_p), ln(o.m), ln(o.d_f), teacher], value: o.value, weight });
        }

        let mut sorted: Vec<f64> = grid.rows().iter().map(|o| o.value).collect();
        sorted.sort_by(f64::total_cmp);
        let min_value = sorted[0];
        let median_value = sorted[sorted.len() / 2];
        let max_value = sorted[sorted.len() - 1];

        let columns: &[Column] = match kind {
            LawKind::Baseline => &[Column::DP, Column::M, Column::DF],
            LawKind::Distilled => &[Column::DP, Column::M, Column::DF, Column::Teacher],
        };
        let unidentifiable = columns
            .iter()
            .enumerate()
            .filter(|&(k, _)| rows.iter().all(|r| r.logs[k] == rows[0].logs[k]))
            .map(|(_, &c)| c)
            .collect();
        let diagnostics = FitDiagnostics {
            degenerate: max_value - min_value <= 1e-12 * max_value,
            unidentifiable,
            abandoned_starts: Vec::new(),
        };
        Ok(Self { kind, metric: grid.metric(), config, rows, min_value, median_value, diagnostics })
    }

    /// Law being fitted.
    pub fn kind(&self) -> LawKind {
        self.kind
    }

    /// Length of the internal parameter vector.
    pub fn n_params(&self) -> usize {
        self.kind.n_params()
    }

    /// Number of rows.
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// The configuration.
    pub fn config(&self) -> &FitConfig {
        &self.config
    }

    /// Deterministic start point `start`: ChaCha8 stream `start` of `seed`.
    pub fn initial_point(&self, start: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        rng.set_stream(start as u64);
        let mut draw = |r: LogRange| if r.lo == r.hi { r.lo } else { rng.random_range(r.lo..r.hi) };
        let mut u = vec![0.0; self.n_params()];
        u[0] = ln(self.min_value) + draw(LogRange::from_linear(1e-6, 0.5));
        let log_median = ln(self.median_value);
        for pair in 0..(self.n_params() - 1) / 2 {
            u[1 + 2 * pair] = draw(self.config.exponent_init_range);
            u[2 + 2 * pair] = log_median - draw(self.config.scale_init_range);
        }
        u
    }

    /// Residual of `row` at `u`; fills `jac` with its gradient when given.
    fn row_residual(&self, u: &[f64], row: &Row, mut jac: Option<&mut [f64]>) -> f64 {
        let asymptote = if u[0] < ZERO_BRANCH_LOG { 0.0 } else { exp(u[0]) };
        let mut pred = asymptote;
        if let Some(j) = jac.as_deref_mut() {
            j[0] = asymptote * row.weight;
        }
        for k in 0..(self.n_params() - 1) / 2 {
            let e = exp(u[1 + 2 * k]);
            let lx = row.logs[k];
            let mut t = exp(u[2 + 2 * k] - e * lx);
            if t < FLUSH_THRESHOLD {
                t = 0.0;
            }
            pred += t;
            if let Some(j) = jac.as_deref_mut() {
                j[1 + 2 * k] = -t * lx * e * row.weight;
                j[2 + 2 * k] = t * row.weight;
            }
        }
        (pred - row.value) * row.weight
    }

    /// Residual vector at `u`.
    pub fn residuals(&self, u: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|r| self.row_residual(u, r, None)).collect()
    }

    /// Row-major `rows x n_params` Jacobian of the residuals at `u`.
    pub fn jacobian(&self, u: &[f64]) -> Vec<f64> {
        let p = self.n_params();
        let mut j = vec![0.0; self.rows.len() * p];
        for (r, chunk) in self.rows.iter().zip(j.chunks_mut(p)) {
            self.row_residual(u, r, Some(chunk));
        }
        j
    }

    /// Coefficients encoded by an internal point.
    pub fn law_at(&self, u: &[f64]) -> Law {
        let base = BaselineLawParams {
            metric: self.metric,
            model_size_unit: self.config.model_size_unit,
            asymptote: if u[0] < ZERO_BRANCH_LOG { 0.0 } else { exp(u[0]) },
            alpha: exp(u[1]),
            lambda_p: exp(-u[2]),
            beta: exp(u[3]),
            lambda_m: exp(-u[4]),
            gamma: exp(u[5]),
            lambda_f: exp(-u[6]),
        };
        match self.kind {
            LawKind::Baseline => Law::Baseline(base),
            LawKind::Distilled => Law::Distilled(DistilledLawParams { base, eta: exp(u[7]), delta: exp(-u[8]) }),
        }
    }

    fn cost_and_normal_equations(&self, u: &[f64], jtj: &mut [f64], grad: &mut [f64]) -> f64 {
        let p = self.n_params();
        jtj.iter_mut().for_each(|v| *v = 0.0);
        grad.iter_mut().for_each(|v| *v = 0.0);
        let mut jrow = [0.0; 9];
        let mut cost = 0.0;
        for row in &self.rows {
            let r = self.row_residual(u, row, Some(&mut jrow[..p]));
            cost += r * r;
            for a in 0..p {
                grad[a] += jrow[a] * r;
                for b in 0..=a {
                    jtj[a * p + b] += jrow[a] * jrow[b];
                }
            }
        }
        for a in 0..p {
            for b in 0..a {
                jtj[b * p + a] = jtj[a * p + b];
            }
        }
        cost
    }

    fn cost(&self, u: &[f64]) -> f64 {
        self.rows
            .iter()
            .map(|r| {
                let v = self.row_residual(u, r, None);
                v * v
            })
            .sum()
    }

    /// Runs Levenberg-Marquardt from [`FitProblem::initial_point`]`(start)`.
    pub fn run_start(&self, start: usize) -> StartOutcome {
        self.run_from(start, self.initial_point(start))
    }

    /// Runs Levenberg-Marquardt from an explicit internal point.
    pub fn run_from(&self, start_index: usize, mut u: Vec<f64>) -> StartOutcome {
        let p = self.n_params();
        let cfg = &self.config;
        let mut jtj = vec![0.0; p * p];
        let mut grad = vec![0.0; p];
        let mut cost = self.cost_and_normal_equations(&u, &mut jtj, &mut grad);
        if !cost.is_finite() || jtj.iter().chain(&grad).any(|v| !v.is_finite()) {
            return StartOutcome {
                start_index,
                point: u,
                sse: f64::INFINITY,
                n_iterations: 0,
                converged: false,
                abandoned: true,
                trace: Vec::new(),
            };
        }

        let mut trace = vec![cost];
        let mut damping = INITIAL_DAMPING;
        let mut converged = false;
        let mut iterations = 0;
        let mut system = vec![0.0; p * p];
        let mut step = vec![0.0; p];
        let mut trial = vec![0.0; p];

        while iterations < cfg.max_iterations {
            if cost == 0.0 || grad.iter().all(|g| g.abs() <= cfg.gradient_tolerance) {
                converged = true;
                break;
            }
            iterations += 1;

            system.copy_from_slice(&jtj);
            let floor = (0..p).fold(0.0f64, |m, a| m.max(jtj[a * p + a])) * DIAG_FLOOR + 1e-300;
            for a in 0..p {
                let diag = jtj[a * p + a].max(floor);
                system[a * p + a] += damping * diag;
            }
            if !solve_spd(&mut system, &grad, &mut step, p) {
                damping = (damping * 2.0).min(MAX_DAMPING);
                continue;
            }
            let step_norm = sqrt(step.iter().map(|s| s * s).sum());
            let u_norm = sqrt(u.iter().map(|s| s * s).sum());
            if step_norm <= cfg.step_tolerance * (u_norm + cfg.step_tolerance) {
                converged = true;
                break;
            }
            let largest = step.iter().fold(0.0f64, |m, s| m.max(s.abs()));
            let shrink = if largest > MAX_LOG_STEP { MAX_LOG_STEP / largest } else { 1.0 };
            for a in 0..p {
                trial[a] = (u[a] - shrink * step[a]).clamp(-COORDINATE_BOUND, COORDINATE_BOUND);
            }
            let trial_cost = self.cost(&trial);
            if trial_cost.is_finite() && trial_cost < cost {
                u.copy_from_slice(&trial);
                cost = self.cost_and_normal_equations(&u, &mut jtj, &mut grad);
                trace.push(cost);
                damping = (damping * 0.5).max(MIN_DAMPING);
            } else {
                damping = (damping * 2.0).min(MAX_DAMPING);
            }
        }
        StartOutcome { start_index, point: u, sse: cost, n_iterations: iterations, converged, abandoned: false, trace }
    }

    /// Picks the winner among `outcomes` (lowest SSE, then lowest start index),
    /// independent of their order.
    pub fn finish(&self, outcomes: &[StartOutcome]) -> Result<FitResult> {
        let best = outcomes
            .iter()
            .filter(|o| !o.abandoned && o.sse.is_finite())
            .min_by(|a, b| a.sse.total_cmp(&b.sse).then(a.start_index.cmp(&b.start_index)))
            .ok_or(Error::AllStartsAbandoned { starts: outcomes.len() })?;
        let mut diagnostics = self.diagnostics.clone();
        diagnostics.abandoned_starts = outcomes.iter().filter(|o| o.abandoned).map(|o| o.start_index).collect();
        diagnostics.abandoned_starts.sort_unstable();
        Ok(FitResult {
            params: self.law_at(&best.point),
            sse: best.sse,
            rmse: sqrt(best.sse / self.rows.len() as f64),
            n_iterations: best.n_iterations,
            converged: best.converged,
            start_index: best.start_index,
            residuals: self.residuals(&best.point),
            point: best.point.clone(),
            diagnostics,
        })
    }

    /// All starts, sequentially, then [`FitProblem::finish`].
    pub fn solve(&self) -> Result<FitResult> {
        let outcomes: Vec<StartOutcome> = (0..self.config.n_starts).map(|s| self.run_start(s)).collect();
        self.finish(&outcomes)
    }
}

/// Solves `a x = b` for symmetric positive definite `a` (overwritten by its
/// Cholesky factor). Returns false if `a` is not numerically positive definite.
fn solve_spd(a: &mut [f64], b: &[f64], x: &mut [f64], n: usize) -> bool {
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        if !(d > 0.0) || !d.is_finite() {
            return false;
        }
        let d = sqrt(d);
        a[j * n + j] = d;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / d;
        }
    }
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= a[i * n + k] * x[k];
        }
        x[i] = s / a[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for k in i + 1..n {
            s -= a[k * n + i] * x[k];
        }
        x[i] = s / a[i * n + i];
    }
    x.iter().all(|v| v.is_finite())
}

/// Fits the baseline law.
pub fn fit_baseline(grid: &ObservationGrid, config: &FitConfig) -> Result<FitResult> {
    FitProblem::new(grid, LawKind::Baseline, *config)?.solve()
}

/// Fits the distilled law; every row needs a teacher size.
pub fn fit_distilled(grid: &ObservationGrid, config: &FitConfig) -> Result<FitResult> {
    FitProblem::new(grid, LawKind::Distilled, *config)?.solve()
}

/// Largest `|analytic - central difference| / (|analytic| + 1e-12)` over the
/// Jacobian entries at `point`, with a log-space step of `1e-6`.
pub fn jacobian_check(problem: &FitProblem, point: &[f64]) -> f64 {
    const H: f64 = 1e-6;
    let p = problem.n_params();
    let analytic = problem.jacobian(point);
    let mut worst: f64 = 0.0;
    let mut probe = point.to_vec();
    for col in 0..p {
        probe[col] = point[col] + H;
        let plus = problem.residuals(&probe);
        probe[col] = point[col] - H;
        let minus = problem.residuals(&probe);
        probe[col] = point[col];
        for (row, (a, b)) in plus.iter().zip(&minus).enumerate() {
            let numeric = (a - b) / (2.0 * H);
            let exact = analytic[row * p + col];
            worst = worst.max((exact - numeric).abs() / (exact.abs() + 1e-12));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn law() -> BaselineLawParams {
        BaselineLawParams {
            metric: MetricKind::CrossEntropyLoss,
            model_size_unit: ModelSizeUnit::RawParamCount,
            asymptote: 0.05,
            alpha: 0.7,
            lambda_p: 2.0,
            beta: 1.3,
            lambda_m: 0.8,
            gamma: 0.45,
            lambda_f: 1.5,
        }
    }

    fn grid_from(l: &Law, with_teacher: bool) -> ObservationGrid {
        let mut rows = Vec::new();
        for &d_p in &[0.05, 0.1, 0.25, 0.33, 0.5, 0.7, 1.0] {
            for &m in &[0.25, 0.5, 0.75, 1.0] {
                for &d_f in &[0.05, 0.25, 0.5, 1.0] {
                    let teacher = with_teacher.then_some(0.5);
                    let input = LawInput { d_p, m, d_f, teacher };
                    rows.push(Observation { d_p, m, d_f, teacher, metric: l.metric(), value: l.eval(&input).unwrap() });
                }
            }
        }
        ObservationGrid::new("unit", rows).unwrap()
    }

    #[test]
    fn grid_validation() {
        let o = Observation { d_p: 1.0, m: 1.0, d_f: 1.0, teacher: None, metric: MetricKind::ErrorRate, value: 0.5 };
        assert_eq!(ObservationGrid::new("x", Vec::new()), Err(Error::EmptyGrid));
        let mut loss = o;
        loss.metric = MetricKind::CrossEntropyLoss;
        assert_eq!(ObservationGrid::new("x", vec![o, loss]), Err(Error::MixedMetrics));
        let mut high = o;
        high.value = 1.5;
        assert!(matches!(ObservationGrid::new("x", vec![o, high]), Err(Error::InvalidObservation { row: 1, .. })));
        let g = ObservationGrid::new("x", vec![o; 7]).unwrap();
        assert_eq!(fit_baseline(&g, &FitConfig::default()), Err(Error::TooFewRows { rows: 7, required: 8 }));
        let g = ObservationGrid::new("x", vec![o; 12]).unwrap();
        assert_eq!(fit_distilled(&g, &FitConfig::default()), Err(Error::MissingTeacherRow { row: 0 }));
    }

    #[test]
    fn asymptote_column_is_exp_u0_in_absolute_mode() {
        let g = grid_from(&Law::Baseline(law()), false);
        let cfg = FitConfig { residual_mode: ResidualMode::Absolute, ..FitConfig::default() };
        let problem = FitProblem::new(&g, LawKind::Baseline, cfg).unwrap();
        // Power terms flushed: inverse scales at e^-800.
        let u = [ln(0.3), 0.0, -800.0, 0.0, -800.0, 0.0, -800.0];
        let j = problem.jacobian(&u);
        for row in 0..problem.n_rows() {
            assert!((j[row * 7] - 0.3).abs() < 1e-15);
            for col in 1..7 {
                assert_eq!(j[row * 7 + col], 0.0);
            }
        }
        assert!(jacobian_check(&problem, &u) < 1e-5);
    }

    #[test]
    fn noise_free_small_grid_round_trip() {
        let truth = Law::Baseline(law());
        let g = grid_from(&truth, false);
        let fit = fit_baseline(&g, &FitConfig { seed: 3, ..FitConfig::default() }).unwrap();
        assert!(fit.converged);
        assert!(fit.rmse < 1e-9, "rmse {}", fit.rmse);
        let got = fit.params.base();
        for (a, b) in [(got.alpha, 0.7), (got.beta, 1.3), (got.gamma, 0.45)] {
            assert!((a - b).abs() < 1e-6 * b, "{a} vs {b}");
        }
    }

    #[test]
    fn constant_values_fit_by_asymptote() {
        let mut rows = grid_from(&Law::Baseline(law()), false).rows().to_vec();
        rows.iter_mut().for_each(|r| {
            r.metric = MetricKind::ErrorRate;
            r.value = 0.25;
        });
        let g = ObservationGrid::new("flat", rows).unwrap();
        let fit = fit_baseline(&g, &FitConfig::default()).unwrap();
        assert!(fit.diagnostics.degenerate);
        assert!(fit.converged);
        for o in g.rows() {
            assert!((fit.params.eval(&o.input()).unwrap() - 0.25).abs() < 1e-6);
        }
    }

    #[test]
    fn constant_teacher_is_flagged() {
        let truth = Law::Distilled(DistilledLawParams { base: law(), eta: 1.1, delta: 4.0 });
        let g = grid_from(&truth, true);
        let fit = fit_distilled(&g, &FitConfig::default()).unwrap();
        assert_eq!(fit.diagnostics.unidentifiable, vec![Column::Teacher]);
        assert_eq!(Column::Teacher.unidentifiable_pair(), "eta and delta");
        assert!(fit.converged);
        assert!(fit.rmse < 1e-6);
    }

    #[test]
    fn accepted_steps_never_increase_cost() {
        let g = grid_from(&Law::Baseline(law()), false);
        let problem = FitProblem::new(&g, LawKind::Baseline, FitConfig::default()).unwrap();
        for s in 0..8 {
            let out = problem.run_start(s);
            assert!(out.trace.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn non_finite_start_is_abandoned() {
        let g = grid_from(&Law::Baseline(law()), false);
        let problem = FitProblem::new(&g, LawKind::Baseline, FitConfig::default()).unwrap();
        let out = problem.run_from(5, vec![800.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(out.abandoned);
        let good = problem.run_start(0);
        let fit = problem.finish(&[out.clone(), good]).unwrap();
        assert_eq!(fit.diagnostics.abandoned_starts, vec![5]);
        assert_eq!(problem.finish(&[out]), Err(Error::AllStartsAbandoned { starts: 1 }));
    }

    #[test]
    fn selection_ignores_outcome_order() {
        let g = grid_from(&Law::Baseline(law()), false);
        let cfg = FitConfig { n_starts: 6, ..FitConfig::default() };
        let problem = FitProblem::new(&g, LawKind::Baseline, cfg).unwrap();
        let mut outs: Vec<_> = (0..6).map(|s| problem.run_start(s)).collect();
        let a = problem.finish(&outs).unwrap();
        outs.reverse();
        assert_eq!(problem.finish(&outs).unwrap(), a);
        // Equal SSE: the lower index wins.
        let mut tie = outs[0].clone();
        tie.start_index = 99;
        tie.sse = a.sse;
        tie.point = a.point.clone();
        assert_eq!(problem.finish(&[tie, outs[5 - a.start_index].clone()]).unwrap().start_index, a.start_index);
    }

    #[test]
    fn config_validation() {
        let bad = FitConfig { n_starts: 0, ..FitConfig::default() };
        assert!(bad.validate().is_err());
        let bad = FitConfig { step_tolerance: 0.0, ..FitConfig::default() };
        assert!(bad.validate().is_err());
        let bad = FitConfig { exponent_init_range: LogRange { lo: 1.0, hi: 0.0 }, ..FitConfig::default() };
        assert!(bad.validate().is_err());
    }
}
