//! Baseline and distilled scaling laws.
//!
//! Both laws are sums of an asymptote and independent power terms
//! `x^(-exponent) / scale`, one per resource. Every power term is formed as
//! `exp(-exponent * ln x)` and flushed to zero below `1e-300`; the flush is
//! reported through [`Evaluation::flushed`].

mod presets;

pub use presets::{
    load_presets, lookup_baseline, lookup_distilled, CoefficientPreset, Dataset,
    DistilledPreset, PresetLaw,
};

use crate::error::{Error, Result};
use crate::math::power_term;

/// Which downstream metric a law predicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum MetricKind {
    /// Classification error as a fraction in `[0, 1]`.
    ErrorRate,
    /// Cross-entropy loss in nats.
    CrossEntropyLoss,
}

impl MetricKind {
    /// Short name used in files: `error` or `loss`.
    pub fn as_str(self) -> &'static str {
        match self {
            MetricKind::ErrorRate => "error",
            MetricKind::CrossEntropyLoss => "loss",
        }
    }

    /// Inverse of [`MetricKind::as_str`].
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "error" => Some(MetricKind::ErrorRate),
            "loss" => Some(MetricKind::CrossEntropyLoss),
            _ => None,
        }
    }
}

/// Unit in which the model size `M` (and the teacher size) is expressed for
/// a coefficient set.
///
/// Published coefficients do not state their unit. With `beta` near 5 a raw
/// parameter count makes the model term vanish, so the unit is carried
/// explicitly rather than guessed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ModelSizeUnit {
    /// Number of parameters.
    #[default]
    RawParamCount,
    /// Parameters / 1e6.
    MillionsOfParams,
    /// Number of attention heads.
    AttentionHeads,
}

impl ModelSizeUnit {
    /// Short name used in files: `raw`, `millions` or `heads`.
    pub fn as_str(self) -> &'static str {
        match self {
            ModelSizeUnit::RawParamCount => "raw",
            ModelSizeUnit::MillionsOfParams => "millions",
            ModelSizeUnit::AttentionHeads => "heads",
        }
    }

    /// Inverse of [`ModelSizeUnit::as_str`].
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "raw" => Some(ModelSizeUnit::RawParamCount),
            "millions" => Some(ModelSizeUnit::MillionsOfParams),
            "heads" => Some(ModelSizeUnit::AttentionHeads),
            _ => None,
        }
    }
}

/// Coefficients of the baseline law (error rate or loss share one form).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BaselineLawParams {
    /// Metric the law predicts.
    pub metric: MetricKind,
    /// Unit of `M`.
    pub model_size_unit: ModelSizeUnit,
    /// Irreducible error or loss, `>= 0`.
    pub asymptote: f64,
    /// Pretraining-data exponent.
    pub alpha: f64,
    /// Pretraining-data scale.
    pub lambda_p: f64,
    /// Model-size exponent.
    pub beta: f64,
    /// Model-size scale.
    pub lambda_m: f64,
    /// Fine-tuning-data exponent.
    pub gamma: f64,
    /// Fine-tuning-data scale.
    pub lambda_f: f64,
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value, reason: "must be positive and finite" })
    }
}

impl BaselineLawParams {
    /// Checks the coefficient invariants.
    pub fn validate(&self) -> Result<()> {
        if !(self.asymptote >= 0.0 && self.asymptote.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "asymptote",
                value: self.asymptote,
                reason: "must be nonnegative and finite",
            });
        }
        check_positive("alpha", self.alpha)?;
        check_positive("lambda_p", self.lambda_p)?;
        check_positive("beta", self.beta)?;
        check_positive("lambda_m", self.lambda_m)?;
        check_positive("gamma", self.gamma)?;
        check_positive("lambda_f", self.lambda_f)
    }

    /// Predicted metric at `input`; the teacher field is ignored.
    pub fn eval(&self, input: &LawInput) -> Result<f64> {
        self.evaluate(input).map(|e| e.value)
    }

    /// Prediction together with its diagnostics.
    pub fn evaluate(&self, input: &LawInput) -> Result<Evaluation> {
        self.validate()?;
        input.validate()?;
        Ok(self.evaluate_unchecked(input))
    }

    pub(crate) fn evaluate_unchecked(&self, input: &LawInput) -> Evaluation {
        let (p, fp) = power_term(input.d_p, self.alpha, self.lambda_p);
        let (m, fm) = power_term(input.m, self.beta, self.lambda_m);
        let (f, ff) = power_term(input.d_f, self.gamma, self.lambda_f);
        let value = self.asymptote + p + m + f;
        Evaluation {
            value,
            flushed: fp || fm || ff,
            exceeds_unit_error: self.metric == MetricKind::ErrorRate && value > 1.0,
        }
    }
}

/// Coefficients of the distilled law: a baseline-shaped body plus a
/// teacher-size term `T^(-eta) / delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistilledLawParams {
    /// Coefficients of the student body (`E'`, `alpha'`, ...).
    pub base: BaselineLawParams,
    /// Teacher-size exponent.
    pub eta: f64,
    /// Teacher-term scale.
    pub delta: f64,
}

impl DistilledLawParams {
    /// Checks the coefficient invariants.
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        check_positive("eta", self.eta)?;
        check_positive("delta", self.delta)
    }

    /// `T^(-eta) / delta` for a validated teacher size.
    pub fn teacher_term(&self, teacher: f64) -> f64 {
        power_term(teacher, self.eta, self.delta).0
    }

    /// Predicted metric at `input`, which must carry a teacher size.
    pub fn eval(&self, input: &LawInput) -> Result<f64> {
        self.evaluate(input).map(|e| e.value)
    }

    /// Prediction together with its diagnostics.
    pub fn evaluate(&self, input: &LawInput) -> Result<Evaluation> {
        self.validate()?;
        input.validate()?;
        let teacher = input.teacher.ok_or(Error::MissingTeacher)?;
        let body = self.base.evaluate_unchecked(input);
        let (t, ft) = power_term(teacher, self.eta, self.delta);
        let value = body.value + t;
        Ok(Evaluation {
            value,
            flushed: body.flushed || ft,
            exceeds_unit_error: self.base.metric == MetricKind::ErrorRate && value > 1.0,
        })
    }
}

/// A prediction with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    /// Predicted error rate or loss.
    pub value: f64,
    /// At least one power term underflowed and was flushed to zero.
    pub flushed: bool,
    /// Error-rate prediction above 1; returned as-is but outside the law's range.
    pub exceeds_unit_error: bool,
}

/// Point at which a law is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LawInput {
    /// Pretraining example count.
    pub d_p: f64,
    /// Student model size, in the law's [`ModelSizeUnit`].
    pub m: f64,
    /// Fine-tuning example count.
    pub d_f: f64,
    /// Teacher model size (distilled law only), same unit as `m`.
    pub teacher: Option<f64>,
}

impl LawInput {
    /// Input without a teacher.
    pub fn new(d_p: f64, m: f64, d_f: f64) -> Self {
        Self { d_p, m, d_f, teacher: None }
    }

    /// Input with a teacher size.
    pub fn with_teacher(d_p: f64, m: f64, d_f: f64, teacher: f64) -> Self {
        Self { d_p, m, d_f, teacher: Some(teacher) }
    }

    /// All present fields must be strictly positive and finite.
    pub fn validate(&self) -> Result<()> {
        let fields = [("d_p", self.d_p), ("m", self.m), ("d_f", self.d_f)];
        for (field, value) in fields {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::Domain { field, value });
            }
        }
        match self.teacher {
            Some(t) if !(t > 0.0 && t.is_finite()) => Err(Error::Domain { field: "teacher", value: t }),
            _ => Ok(()),
        }
    }
}

/// Either law, for code that handles both (fitting, synthesis, files).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Law {
    /// Non-distilled training.
    Baseline(BaselineLawParams),
    /// Small-to-large distillation.
    Distilled(DistilledLawParams),
}

impl Law {
    /// Predicted metric at `input`.
    pub fn eval(&self, input: &LawInput) -> Result<f64> {
        match self {
            Law::Baseline(p) => p.eval(input),
            Law::Distilled(p) => p.eval(input),
        }
    }

    /// Prediction with diagnostics.
    pub fn evaluate(&self, input: &LawInput) -> Result<Evaluation> {
        match self {
            Law::Baseline(p) => p.evaluate(input),
            Law::Distilled(p) => p.evaluate(input),
        }
    }

    /// The body coefficients (the baseline itself, or the distilled student body).
    pub fn base(&self) -> &BaselineLawParams {
        match self {
            Law::Baseline(p) => p,
            Law::Distilled(p) => &p.base,
        }
    }

    /// Metric predicted by the law.
    pub fn metric(&self) -> MetricKind {
        self.base().metric
    }

    /// Validates the coefficients.
    pub fn validate(&self) -> Result<()> {
        match self {
            Law::Baseline(p) => p.validate(),
            Law::Distilled(p) => p.validate(),
        }
    }
}

/// Baseline minus distilled prediction at `input`; positive means the
/// distilled model has the lower error.
pub fn predict_gap(
    baseline: &BaselineLawParams,
    distilled: &DistilledLawParams,
    input: &LawInput,
) -> Result<f64> {
    let e2 = distilled.eval(input)?;
    let e1 = baseline.eval(input)?;
    Ok(e1 - e2)
}
