//! Experiment grids, parameter-count estimates and synthetic observations.

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::fitting::{Observation, ObservationGrid};
use crate::laws::{Dataset, Law, LawInput, ModelSizeUnit};

/// Default sampling fractions.
pub const DEFAULT_FRACTIONS: [f64; 7] = [0.05, 0.10, 0.25, 0.33, 0.50, 0.70, 1.00];
/// Pretraining set size: about 1.28M images over 1000 classes.
pub const PRETRAINING_EXAMPLES: u64 = 1_281_167;
/// Pretraining class count.
pub const PRETRAINING_CLASSES: u64 = 1000;
/// Default head counts.
pub const DEFAULT_HEADS: [u32; 4] = [2, 4, 6, 8];

/// How sampled counts are rounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Rounding {
    /// `floor(fraction * per_class) * classes`: every class keeps the same count.
    #[default]
    FloorPerClass,
}

/// Fractions of one dataset to sample.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SamplingPlan {
    /// Strictly increasing, each in `(0, 1]`.
    pub fractions: Vec<f64>,
    /// Total examples in the full dataset.
    pub base_dataset_size: u64,
    /// Number of classes.
    pub class_count: u64,
    /// Rounding rule.
    pub rounding: Rounding,
}

impl SamplingPlan {
    /// Default fractions over a dataset of the given size.
    pub fn new(base_dataset_size: u64, class_count: u64) -> Self {
        Self {
            fractions: DEFAULT_FRACTIONS.to_vec(),
            base_dataset_size,
            class_count,
            rounding: Rounding::FloorPerClass,
        }
    }

    /// The pretraining set.
    pub fn pretraining() -> Self {
        Self::new(PRETRAINING_EXAMPLES, PRETRAINING_CLASSES)
    }

    /// The training split of a downstream dataset.
    pub fn downstream(dataset: Dataset) -> Self {
        let (size, classes) = match dataset {
            Dataset::ImageNet100 => (130_000, 100),
            Dataset::TinyImageNet => (100_000, 200),
            Dataset::Cifar100 => (50_000, 100),
            Dataset::Cifar10 => (50_000, 10),
        };
        Self::new(size, classes)
    }

    /// Replaces the fractions.
    pub fn with_fractions(mut self, fractions: Vec<f64>) -> Self {
        self.fractions = fractions;
        self
    }

    /// Examples per class in the full dataset.
    pub fn per_class(&self) -> u64 {
        self.base_dataset_size / self.class_count
    }

    /// Sampled example count for `fraction`.
    pub fn sampled_count(&self, fraction: f64) -> Result<u64> {
        let per_class = self.per_class() as f64;
        // The relative nudge keeps decimal fractions such as 0.29 * 100 from
        // landing just below an integer.
        let picked = libm::floor(fraction * per_class * (1.0 + 1e-12)) as u64;
        if picked == 0 {
            return Err(Error::EmptyFraction { fraction });
        }
        Ok(picked * self.class_count)
    }

    /// Checks the invariants, including a nonzero count for every fraction.
    pub fn validate(&self) -> Result<()> {
        if self.class_count == 0 || self.base_dataset_size == 0 {
            return Err(Error::InvalidConfig("dataset size and class count must be positive"));
        }
        if self.fractions.is_empty() {
            return Err(Error::InvalidConfig("at least one fraction is required"));
        }
        let mut prev = 0.0;
        for &f in &self.fractions {
            if !(f > prev && f <= 1.0) {
                return Err(Error::InvalidConfig("fractions must be strictly increasing within (0, 1]"));
            }
            prev = f;
            self.sampled_count(f)?;
        }
        Ok(())
    }
}

/// A vision transformer configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelSpec {
    /// Attention heads.
    pub heads: u32,
    /// Width per head.
    pub head_dim: u32,
    /// Transformer blocks.
    pub depth: u32,
}

impl ModelSpec {
    /// `heads` heads of width 64, 12 blocks.
    pub fn with_heads(heads: u32) -> Self {
        Self { heads, head_dim: 64, depth: 12 }
    }

    /// `heads * head_dim`.
    pub fn embed_dim(&self) -> u64 {
        self.heads as u64 * self.head_dim as u64
    }

    /// See [`estimate_params`].
    pub fn param_estimate(&self) -> u64 {
        estimate_params(self)
    }

    /// Model size in `unit`.
    pub fn size_in(&self, unit: ModelSizeUnit) -> f64 {
        match unit {
            ModelSizeUnit::RawParamCount => self.param_estimate() as f64,
            ModelSizeUnit::MillionsOfParams => self.param_estimate() as f64 / 1e6,
            ModelSizeUnit::AttentionHeads => self.heads as f64,
        }
    }
}

/// The default model family: 2, 4, 6 and 8 heads.
pub fn default_models() -> Vec<ModelSpec> {
    DEFAULT_HEADS.iter().map(|&h| ModelSpec::with_heads(h)).collect()
}

/// Dominant-term parameter count `depth * 12 * embed_dim^2`: four attention
/// and eight MLP weight matrices of size `d x d` per block. Biases, norms and
/// embeddings are ignored.
pub fn estimate_params(spec: &ModelSpec) -> u64 {
    let d = spec.embed_dim();
    spec.depth as u64 * 12 * d * d
}

/// One planned training run.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExperimentRow {
    /// Pretraining fraction.
    pub upstream_fraction: f64,
    /// Student model.
    pub model: ModelSpec,
    /// Fine-tuning fraction.
    pub downstream_fraction: f64,
    /// Pretraining examples.
    pub d_p: u64,
    /// Fine-tuning examples.
    pub d_f: u64,
}

impl ExperimentRow {
    /// Law input with the model measured in `unit`.
    pub fn law_input(&self, unit: ModelSizeUnit, teacher: Option<&ModelSpec>) -> LawInput {
        LawInput {
            d_p: self.d_p as f64,
            m: self.model.size_in(unit),
            d_f: self.d_f as f64,
            teacher: teacher.map(|t| t.size_in(unit)),
        }
    }
}

/// Cross product of upstream fractions, models and downstream fractions.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExperimentPlan {
    /// Rows ordered by upstream fraction, then model, then downstream fraction.
    pub rows: Vec<ExperimentRow>,
}

impl ExperimentPlan {
    /// Law inputs of every row.
    pub fn law_inputs(&self, unit: ModelSizeUnit, teacher: Option<&ModelSpec>) -> Vec<LawInput> {
        self.rows.iter().map(|r| r.law_input(unit, teacher)).collect()
    }

    /// Law inputs with each axis divided by its largest value in the plan.
    /// The teacher is divided by the same factor as the student, so their
    /// ratio is kept.
    pub fn normalized_inputs(&self, unit: ModelSizeUnit, teacher: Option<&ModelSpec>) -> Vec<LawInput> {
        let raw = self.law_inputs(unit, teacher);
        let max = |f: fn(&LawInput) -> f64| raw.iter().map(f).fold(0.0, f64::max);
        let (dp, m, df) = (max(|i| i.d_p), max(|i| i.m), max(|i| i.d_f));
        raw.iter()
            .map(|i| LawInput { d_p: i.d_p / dp, m: i.m / m, d_f: i.d_f / df, teacher: i.teacher.map(|t| t / m) })
            .collect()
    }
}

/// One row per (upstream fraction, model, downstream fraction).
pub fn build_plan(upstream: &SamplingPlan, downstream: &SamplingPlan, models: &[ModelSpec]) -> Result<ExperimentPlan> {
    upstream.validate()?;
    downstream.validate()?;
    if models.iter().any(|m| m.heads == 0 || m.head_dim == 0 || m.depth == 0) {
        return Err(Error::InvalidConfig("model dimensions must be positive"));
    }
    let mut rows = Vec::with_capacity(upstream.fractions.len() * models.len() * downstream.fractions.len());
    for &fu in &upstream.fractions {
        let d_p = upstream.sampled_count(fu)?;
        for model in models {
            for &fd in &downstream.fractions {
                rows.push(ExperimentRow {
                    upstream_fraction: fu,
                    model: *model,
                    downstream_fraction: fd,
                    d_p,
                    d_f: downstream.sampled_count(fd)?,
                });
            }
        }
    }
    Ok(ExperimentPlan { rows })
}

/// Full cross product of the given axis values, ordered by `d_p`, then `m`, then `d_f`.
pub fn cross_inputs(d_p: &[f64], m: &[f64], d_f: &[f64], teacher: Option<f64>) -> Vec<LawInput> {
    let mut out = Vec::with_capacity(d_p.len() * m.len() * d_f.len());
    for &a in d_p {
        for &b in m {
            for &c in d_f {
                out.push(LawInput { d_p: a, m: b, d_f: c, teacher });
            }
        }
    }
    out
}

/// Inputs for [`synthesize`].
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisSpec {
    /// Generating law.
    pub generator: Law,
    /// Points to evaluate.
    pub grid: Vec<LawInput>,
    /// Standard deviation of the multiplicative noise.
    pub noise_sigma_relative: f64,
    /// Seed of the noise stream.
    pub seed: u64,
    /// Label stored on the grid.
    pub dataset_label: String,
}

/// Evaluates the generator on every point and applies multiplicative noise
/// `value = law * (1 + sigma * z)`, with `z` standard normal drawn in row
/// order from ChaCha8 seeded by `seed` (`rand_distr::StandardNormal`).
/// With `sigma = 0` the values are the law values exactly.
pub fn synthesize(spec: &SynthesisSpec) -> Result<ObservationGrid> {
    if !(spec.noise_sigma_relative >= 0.0) || !spec.noise_sigma_relative.is_finite() {
        return Err(Error::InvalidConfig("noise_sigma_relative must be nonnegative and finite"));
    }
    if spec.grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let metric = spec.generator.metric();
    let mut rows = Vec::with_capacity(spec.grid.len());
    for input in &spec.grid {
        let exact = spec.generator.eval(input)?;
        let z: f64 = rng.sample(StandardNormal);
        let value = if spec.noise_sigma_relative == 0.0 { exact } else { exact * (1.0 + spec.noise_sigma_relative * z) };
        rows.push(Observation { d_p: input.d_p, m: input.m, d_f: input.d_f, teacher: input.teacher, metric, value });
    }
    ObservationGrid::new(spec.dataset_label.clone(), rows)
}
