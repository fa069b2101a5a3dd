//! Distillation boundary analysis.
//!
//! For a baseline law `E1` and a distilled law `E2` sharing the student size
//! `M`, fine-tuning size `D_f` and a fixed teacher size `T`, the differential
//! error
//!
//! ```text
//! F(D_p) = E1 - E2 = (D_p^-a / l_p - D_p^-a' / l_p') + Delta
//! Delta  = (M^-b / l_m - M^-b' / l_m') + (D_f^-g / l_f - D_f^-g' / l_f') - T^-eta / delta + (E - E')
//! ```
//!
//! is positive where distillation wins. With `a < a'` the pretraining pair
//! has a single interior maximum at
//! `D_p* = ((a' / l_p') / (a / l_p))^(1 / (a' - a))`, and
//! `F -> Delta` as `D_p -> inf`, so a negative `Delta` with `F(D_p*) > 0`
//! forces exactly one crossing `D_p**` to the right of `D_p*`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::laws::{BaselineLawParams, DistilledLawParams, DistilledPreset, MetricKind, ModelSizeUnit};
use crate::math::{exp, ln, power_term};

/// Grid resolution for sign scans.
pub const DEFAULT_GRID_POINTS: usize = 4096;
/// Relative bracket width at which bisection stops.
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
/// Hard cap on bisection steps.
pub const MAX_BISECTION_STEPS: usize = 200;
/// Ratio tolerance for the `lambda ~ lambda'` conditions.
pub const DEFAULT_LAMBDA_TOLERANCE: f64 = 0.25;

/// A positive interval of pretraining sizes.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchRange {
    /// Lower end.
    pub lo: f64,
    /// Upper end.
    pub hi: f64,
}

impl SearchRange {
    /// `0 < lo < hi`, both finite.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo > 0.0 && hi > lo && hi.is_finite() {
            Ok(Self { lo, hi })
        } else {
            Err(Error::InvalidRange { lo, hi })
        }
    }
}

impl Default for SearchRange {
    fn default() -> Self {
        Self { lo: 1e3, hi: 1e9 }
    }
}

/// Which training strategy has the lower error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Winner {
    /// `F > 0`.
    Distilled,
    /// `F <= 0`.
    Baseline,
}

impl Winner {
    fn of(f: f64) -> Self {
        if f > 0.0 {
            Winner::Distilled
        } else {
            Winner::Baseline
        }
    }
}

/// The four `D_p`-independent addends of `Delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeltaBreakdown {
    /// `M^-b / l_m - M^-b' / l_m'`.
    pub model_pair: f64,
    /// `D_f^-g / l_f - D_f^-g' / l_f'`.
    pub finetune_pair: f64,
    /// `T^-eta / delta` (enters with a minus sign).
    pub teacher_term: f64,
    /// `E - E'`.
    pub asymptote_gap: f64,
    /// `model_pair + finetune_pair - teacher_term + asymptote_gap`.
    pub total: f64,
}

/// Sign status of an approximation the analysis relies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum AssumptionStatus {
    /// Holds strictly.
    Holds,
    /// Holds with equality.
    Boundary,
    /// Fails for these numbers.
    Violated,
}

/// Checks of the simplifications behind `Delta < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ApproximationDiagnostics {
    /// `|model pair|`.
    pub model_pair_magnitude: f64,
    /// `|model pair| < 1e-6 |Delta|`.
    pub model_pair_negligible: bool,
    /// The fine-tuning pair.
    pub finetune_pair: f64,
    /// Whether the fine-tuning pair is negative.
    pub finetune_pair_negative: AssumptionStatus,
    /// `Delta < 0`.
    pub delta_negative: bool,
}

/// Closed-form stationary point of `F`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StationaryPoint {
    /// `D_p*`.
    pub d_p: f64,
    /// `F'` goes from positive to negative across `D_p*`.
    pub is_max: bool,
    /// `F(D_p*)`.
    pub f_value: f64,
}

/// A refined root of `F`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Crossing {
    /// Bracket midpoint after refinement.
    pub d_p: f64,
    /// `F` at `d_p`.
    pub f_value: f64,
    /// Final bracket lower end.
    pub bracket_lo: f64,
    /// Final bracket upper end.
    pub bracket_hi: f64,
    /// Bisection steps used.
    pub iterations: usize,
}

/// A sign change of `F` found on the scan grid and refined by bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SignChange {
    /// Winner left of the change.
    pub from: Winner,
    /// Winner right of the change.
    pub to: Winner,
    /// The refined root.
    pub crossing: Crossing,
}

/// Sign pattern of `F` over a search range.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SignProfile {
    /// `F > 0` at every grid point.
    AllPositive,
    /// `F <= 0` at every grid point.
    AllNegative,
    /// At least one sign change, in ascending order.
    Mixed(Vec<SignChange>),
}

impl SignProfile {
    /// Human-readable label.
    pub fn label(&self) -> &'static str {
        match self {
            SignProfile::AllPositive => "all positive",
            SignProfile::AllNegative => "all negative",
            SignProfile::Mixed(_) => "mixed",
        }
    }
}

/// Result of the crossover search.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CrossoverOutcome {
    /// First `Distilled -> Baseline` crossing, if any.
    pub crossing: Option<Crossing>,
    /// Every sign change in the range.
    pub profile: SignProfile,
    /// `Delta < 0` and `a < a'`; without them no crossing is guaranteed.
    pub preconditions_met: bool,
}

/// A maximal sub-interval with a single winner.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Regime {
    /// Interval start.
    pub lo: f64,
    /// Interval end.
    pub hi: f64,
    /// Strategy with the lower error.
    pub winner: Winner,
}

/// Everything the boundary analysis reports for one configuration.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundaryReport {
    /// `Delta` and its addends.
    pub delta: DeltaBreakdown,
    /// `lim F` as `D_p -> inf` (equals `Delta`).
    pub f_limit_at_infinity: f64,
    /// `D_p*`, absent when `a == a'`.
    pub stationary: Option<StationaryPoint>,
    /// `D_p**` search.
    pub crossover: CrossoverOutcome,
    /// Winner table over the search range.
    pub regimes: Vec<Regime>,
    /// Approximation checks.
    pub diagnostics: ApproximationDiagnostics,
    /// Parametric constraint checks.
    pub constraints: ConstraintReport,
}

/// Baseline and distilled laws evaluated at a shared `M`, `D_f` and teacher size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryInputs {
    baseline: BaselineLawParams,
    distilled: DistilledLawParams,
    m: f64,
    d_f: f64,
    teacher: f64,
    delta: DeltaBreakdown,
}

fn positive(field: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { field, value })
    }
}

fn same_kind(metric: (MetricKind, MetricKind), unit: (ModelSizeUnit, ModelSizeUnit)) -> Result<()> {
    if metric.0 != metric.1 {
        return Err(Error::LawMismatch { what: "metric" });
    }
    if unit.0 != unit.1 {
        return Err(Error::LawMismatch { what: "model size unit" });
    }
    Ok(())
}

impl BoundaryInputs {
    /// Validates both laws, their agreement on metric and unit, and the shared sizes.
    pub fn new(
        baseline: BaselineLawParams,
        distilled: DistilledLawParams,
        m: f64,
        d_f: f64,
        teacher: f64,
    ) -> Result<Self> {
        baseline.validate()?;
        distilled.validate()?;
        same_kind(
            (baseline.metric, distilled.base.metric),
            (baseline.model_size_unit, distilled.base.model_size_unit),
        )?;
        positive("m", m)?;
        positive("d_f", d_f)?;
        positive("teacher", teacher)?;

        let b = &baseline;
        let d = &distilled.base;
        let model_pair = power_term(m, b.beta, b.lambda_m).0 - power_term(m, d.beta, d.lambda_m).0;
        let finetune_pair =
            power_term(d_f, b.gamma, b.lambda_f).0 - power_term(d_f, d.gamma, d.lambda_f).0;
        let teacher_term = distilled.teacher_term(teacher);
        let asymptote_gap = b.asymptote - d.asymptote;
        let delta = DeltaBreakdown {
            model_pair,
            finetune_pair,
            teacher_term,
            asymptote_gap,
            total: model_pair + finetune_pair - teacher_term + asymptote_gap,
        };
        Ok(Self { baseline, distilled, m, d_f, teacher, delta })
    }

    /// The baseline law.
    pub fn baseline(&self) -> &BaselineLawParams {
        &self.baseline
    }

    /// The distilled law.
    pub fn distilled(&self) -> &DistilledLawParams {
        &self.distilled
    }

    /// Shared student size.
    pub fn m(&self) -> f64 {
        self.m
    }

    /// Shared fine-tuning size.
    pub fn d_f(&self) -> f64 {
        self.d_f
    }

    /// Teacher size.
    pub fn teacher(&self) -> f64 {
        self.teacher
    }

    fn pretraining_pair(&self, d_p: f64) -> f64 {
        let b = &self.baseline;
        let d = &self.distilled.base;
        power_term(d_p, b.alpha, b.lambda_p).0 - power_term(d_p, d.alpha, d.lambda_p).0
    }

    /// `F(d_p)`; positive means the distilled model has the lower error.
    pub fn differential_error(&self, d_p: f64) -> Result<f64> {
        positive("d_p", d_p)?;
        Ok(self.pretraining_pair(d_p) + self.delta.total)
    }

    /// `Delta` with its addends.
    pub fn delta_constant(&self) -> DeltaBreakdown {
        self.delta
    }

    /// Checks the model-pair and fine-tuning-pair simplifications behind `Delta < 0`.
    /// Flags, never errors.
    pub fn approximation_diagnostics(&self) -> ApproximationDiagnostics {
        let d = self.delta;
        let finetune_pair_negative = if d.finetune_pair < 0.0 {
            AssumptionStatus::Holds
        } else if d.finetune_pair == 0.0 {
            AssumptionStatus::Boundary
        } else {
            AssumptionStatus::Violated
        };
        ApproximationDiagnostics {
            model_pair_magnitude: d.model_pair.abs(),
            model_pair_negligible: d.model_pair.abs() < 1e-6 * d.total.abs(),
            finetune_pair: d.finetune_pair,
            finetune_pair_negative,
            delta_negative: d.total < 0.0,
        }
    }

    /// `F'(d_p) = (a' d_p^(a - a') / l_p' - a / l_p) / d_p^(a + 1)`.
    pub fn derivative_f(&self, d_p: f64) -> Result<f64> {
        positive("d_p", d_p)?;
        let (a, lp) = (self.baseline.alpha, self.baseline.lambda_p);
        let (a2, lp2) = (self.distilled.base.alpha, self.distilled.base.lambda_p);
        let x = ln(d_p);
        let numerator = a2 * exp((a - a2) * x) / lp2 - a / lp;
        Ok(numerator * exp(-(a + 1.0) * x))
    }

    /// Closed-form root of `F'`, computed in log space.
    ///
    /// Returns `Ok(None)` if the root is not a finite positive number.
    pub fn stationary_point(&self) -> Result<Option<StationaryPoint>> {
        let (a, lp) = (self.baseline.alpha, self.baseline.lambda_p);
        let (a2, lp2) = (self.distilled.base.alpha, self.distilled.base.lambda_p);
        if a == a2 {
            return Err(Error::DegenerateExponentGap);
        }
        let log_ratio = (ln(a2) - ln(lp2)) - (ln(a) - ln(lp));
        let d_p = exp(log_ratio / (a2 - a));
        if !(d_p > 0.0 && d_p.is_finite()) {
            return Ok(None);
        }
        let before = self.derivative_f(d_p * (1.0 - 1e-3))?;
        let after = self.derivative_f(d_p * (1.0 + 1e-3))?;
        Ok(Some(StationaryPoint {
            d_p,
            is_max: before > 0.0 && after < 0.0,
            f_value: self.differential_error(d_p)?,
        }))
    }

    fn scan(&self, range: SearchRange, points: usize) -> Result<Vec<(f64, f64)>> {
        let points = points.max(2);
        let (a, b) = (ln(range.lo), ln(range.hi));
        let step = (b - a) / (points - 1) as f64;
        (0..points)
            .map(|i| {
                let d_p = match i {
                    0 => range.lo,
                    _ if i == points - 1 => range.hi,
                    _ => exp(a + step * i as f64),
                };
                let f = self.differential_error(d_p)?;
                if f.is_finite() {
                    Ok((d_p, f))
                } else {
                    Err(Error::NonFinite { d_p })
                }
            })
            .collect()
    }

    fn bisect(&self, mut lo: f64, mut hi: f64, tol: f64) -> Result<Crossing> {
        let left = Winner::of(self.differential_error(lo)?);
        let mut iterations = 0;
        while iterations < MAX_BISECTION_STEPS && hi - lo >= tol * 0.5 * (lo + hi) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let f = self.differential_error(mid)?;
            if !f.is_finite() {
                return Err(Error::NonFinite { d_p: mid });
            }
            if Winner::of(f) == left {
                lo = mid;
            } else {
                hi = mid;
            }
            iterations += 1;
        }
        let d_p = 0.5 * (lo + hi);
        Ok(Crossing { d_p, f_value: self.differential_error(d_p)?, bracket_lo: lo, bracket_hi: hi, iterations })
    }

    /// All sign changes of `F` on a log-spaced grid of `points` over `range`,
    /// each refined by bisection.
    pub fn sign_profile(&self, range: SearchRange, points: usize, tol: f64) -> Result<SignProfile> {
        if !(tol > 0.0) {
            return Err(Error::InvalidConfig("root tolerance must be positive"));
        }
        let samples = self.scan(range, points)?;
        let mut changes = Vec::new();
        for w in samples.windows(2) {
            let (from, to) = (Winner::of(w[0].1), Winner::of(w[1].1));
            if from != to {
                changes.push(SignChange { from, to, crossing: self.bisect(w[0].0, w[1].0, tol)? });
            }
        }
        Ok(if !changes.is_empty() {
            SignProfile::Mixed(changes)
        } else if Winner::of(samples[0].1) == Winner::Distilled {
            SignProfile::AllPositive
        } else {
            SignProfile::AllNegative
        })
    }

    /// Finds `D_p**`, the first `Distilled -> Baseline` crossing in `range`,
    /// scanning [`DEFAULT_GRID_POINTS`] log-spaced points and bisecting until
    /// the bracket is narrower than `tol` times its midpoint.
    pub fn crossover(&self, range: SearchRange, tol: f64) -> Result<CrossoverOutcome> {
        self.crossover_with_grid(range, tol, DEFAULT_GRID_POINTS)
    }

    /// [`BoundaryInputs::crossover`] with an explicit grid size.
    pub fn crossover_with_grid(&self, range: SearchRange, tol: f64, points: usize) -> Result<CrossoverOutcome> {
        let profile = self.sign_profile(range, points, tol)?;
        let crossing = match &profile {
            SignProfile::Mixed(changes) => changes
                .iter()
                .find(|c| c.from == Winner::Distilled && c.to == Winner::Baseline)
                .map(|c| c.crossing),
            _ => None,
        };
        let preconditions_met = self.delta.total < 0.0 && self.baseline.alpha < self.distilled.base.alpha;
        Ok(CrossoverOutcome { crossing, profile, preconditions_met })
    }

    /// Splits `range` at every sign change of `F` into alternating winner intervals.
    pub fn regime_classification(&self, range: SearchRange) -> Result<Vec<Regime>> {
        let profile = self.sign_profile(range, DEFAULT_GRID_POINTS, DEFAULT_ROOT_TOL)?;
        Ok(regimes_from(range, &profile))
    }

    /// Full report: `Delta`, `D_p*`, `D_p**`, regimes, diagnostics and constraints.
    pub fn analyze(&self, range: SearchRange, tol: f64, lambda_tolerance: f64) -> Result<BoundaryReport> {
        let stationary = match self.stationary_point() {
            Ok(s) => s,
            Err(Error::DegenerateExponentGap) => None,
            Err(e) => return Err(e),
        };
        let crossover = self.crossover(range, tol)?;
        let regimes = regimes_from(range, &crossover.profile);
        Ok(BoundaryReport {
            delta: self.delta,
            f_limit_at_infinity: self.delta.total,
            stationary,
            crossover,
            regimes,
            diagnostics: self.approximation_diagnostics(),
            constraints: check_constraints(&self.baseline, &(&self.distilled).into(), lambda_tolerance)?,
        })
    }
}

fn regimes_from(range: SearchRange, profile: &SignProfile) -> Vec<Regime> {
    match profile {
        SignProfile::AllPositive => alloc::vec![Regime { lo: range.lo, hi: range.hi, winner: Winner::Distilled }],
        SignProfile::AllNegative => alloc::vec![Regime { lo: range.lo, hi: range.hi, winner: Winner::Baseline }],
        SignProfile::Mixed(changes) => {
            let mut out = Vec::with_capacity(changes.len() + 1);
            let mut lo = range.lo;
            for c in changes {
                out.push(Regime { lo, hi: c.crossing.d_p, winner: c.from });
                lo = c.crossing.d_p;
            }
            out.push(Regime { lo, hi: range.hi, winner: changes[changes.len() - 1].to });
            out
        }
    }
}

/// Distilled coefficients as far as they are known; published distilled fits
/// carry exponents only.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistilledCoefficients {
    /// Metric.
    pub metric: MetricKind,
    /// Unit of `M`.
    pub model_size_unit: ModelSizeUnit,
    /// `a'`.
    pub alpha: f64,
    /// `b'`.
    pub beta: f64,
    /// `g'`.
    pub gamma: f64,
    /// `eta`.
    pub eta: f64,
    /// `E'`, if known.
    pub asymptote: Option<f64>,
    /// `l_m'`, if known.
    pub lambda_m: Option<f64>,
    /// `l_f'`, if known.
    pub lambda_f: Option<f64>,
}

impl From<&DistilledLawParams> for DistilledCoefficients {
    fn from(p: &DistilledLawParams) -> Self {
        Self {
            metric: p.base.metric,
            model_size_unit: p.base.model_size_unit,
            alpha: p.base.alpha,
            beta: p.base.beta,
            gamma: p.base.gamma,
            eta: p.eta,
            asymptote: Some(p.base.asymptote),
            lambda_m: Some(p.base.lambda_m),
            lambda_f: Some(p.base.lambda_f),
        }
    }
}

impl From<&DistilledPreset> for DistilledCoefficients {
    fn from(p: &DistilledPreset) -> Self {
        Self {
            metric: p.metric,
            model_size_unit: p.model_size_unit,
            alpha: p.alpha,
            beta: p.beta,
            gamma: p.gamma,
            eta: p.eta,
            asymptote: None,
            lambda_m: None,
            lambda_f: None,
        }
    }
}

/// One checked condition. `satisfied == None` means "not evaluable".
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Condition {
    /// Outcome, absent when an operand is unknown.
    pub satisfied: Option<bool>,
    /// Margin, gap or ratio behind the outcome.
    pub value: Option<f64>,
}

impl Condition {
    fn unknown() -> Self {
        Self { satisfied: None, value: None }
    }

    fn of(satisfied: bool, value: f64) -> Self {
        Self { satisfied: Some(satisfied), value: Some(value) }
    }
}

/// Outcome of the parametric constraint checks.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConstraintReport {
    /// `E < E'`; value `E' - E`.
    pub e_ordering: Condition,
    /// `g > g'`; value `g - g'`.
    pub gamma_ordering: Condition,
    /// `b < b'`; value `b' - b`.
    pub beta_ordering: Condition,
    /// `a - a' in (-1, 0)`; value `a - a'`.
    pub alpha_gap_in_range: Condition,
    /// `l_m ~ l_m'`; value `l_m / l_m'`.
    pub lambda_m_close: Condition,
    /// `l_f ~ l_f'`; value `l_f / l_f'`.
    pub lambda_f_close: Condition,
    /// Ratio tolerance used for the closeness checks.
    pub lambda_tolerance: f64,
    /// Conjunction of every evaluable condition.
    pub all_satisfied: bool,
}

/// Evaluates the parametric constraints. `lambda ~ lambda'` means
/// `max(l/l', l'/l) <= 1 + lambda_tolerance`.
pub fn check_constraints(
    baseline: &BaselineLawParams,
    distilled: &DistilledCoefficients,
    lambda_tolerance: f64,
) -> Result<ConstraintReport> {
    same_kind(
        (baseline.metric, distilled.metric),
        (baseline.model_size_unit, distilled.model_size_unit),
    )?;
    if !(lambda_tolerance >= 0.0 && lambda_tolerance.is_finite()) {
        return Err(Error::InvalidConfig("lambda tolerance must be nonnegative"));
    }
    let close = |l: f64, other: Option<f64>| match other {
        Some(o) => {
            let r = l / o;
            Condition::of(r.max(1.0 / r) <= 1.0 + lambda_tolerance, r)
        }
        None => Condition::unknown(),
    };
    let gap = baseline.alpha - distilled.alpha;
    let e_ordering = match distilled.asymptote {
        Some(e2) => Condition::of(baseline.asymptote < e2, e2 - baseline.asymptote),
        None => Condition::unknown(),
    };
    let gamma_ordering =
        Condition::of(baseline.gamma > distilled.gamma, baseline.gamma - distilled.gamma);
    let beta_ordering = Condition::of(baseline.beta < distilled.beta, distilled.beta - baseline.beta);
    let alpha_gap_in_range = Condition::of(gap > -1.0 && gap < 0.0, gap);
    let lambda_m_close = close(baseline.lambda_m, distilled.lambda_m);
    let lambda_f_close = close(baseline.lambda_f, distilled.lambda_f);
    let all_satisfied = [
        e_ordering,
        gamma_ordering,
        beta_ordering,
        alpha_gap_in_range,
        lambda_m_close,
        lambda_f_close,
    ]
    .iter()
    .all(|c| c.satisfied != Some(false));
    Ok(ConstraintReport {
        e_ordering,
        gamma_ordering,
        beta_ordering,
        alpha_gap_in_range,
        lambda_m_close,
        lambda_f_close,
        lambda_tolerance,
        all_satisfied,
    })
}
