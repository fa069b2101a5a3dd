//! Parameter files (TOML).
//!
//! ```toml
//! format_version = 1
//! law = "distilled"
//! metric = "error"
//! model_size_unit = "raw"
//! asymptote = 0.0
//! alpha = 0.702
//! lambda_p = 0.00439
//! # ... beta, lambda_m, gamma, lambda_f, eta, delta
//! provenance = "free text"
//!
//! [fit]
//! sse = 1.2e-30
//! rmse = 7.8e-17
//! converged = true
//! seed = 0
//! ```
//!
//! Distilled files may omit the asymptote and every scale. Such files hold
//! exponents only and are accepted by `check-constraints` but not by commands
//! that evaluate the law.

use std::path::Path;

use serde::{Deserialize, Serialize};
use tlscale_core::boundary::DistilledCoefficients;
use tlscale_core::laws::Dataset;
use tlscale_core::{BaselineLawParams, DistilledLawParams, Law, MetricKind, ModelSizeUnit};

use crate::error::{CliError, CliResult};

pub const FORMAT_VERSION: u32 = 1;

/// Prefix selecting a bundled preset instead of a file: `preset:<dataset>:<error|loss|distilled>`.
pub const PRESET_PREFIX: &str = "preset:";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LawTag {
    Baseline,
    Distilled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitRecord {
    pub sse: f64,
    pub rmse: f64,
    pub converged: bool,
    pub seed: u64,
    pub start_index: usize,
    pub n_iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamFile {
    #[serde(default = "format_version")]
    pub format_version: u32,
    pub law: LawTag,
    pub metric: String,
    #[serde(default = "raw_unit")]
    pub model_size_unit: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asymptote: Option<f64>,
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_p: Option<f64>,
    pub beta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_m: Option<f64>,
    pub gamma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_f: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitRecord>,
}

fn format_version() -> u32 {
    FORMAT_VERSION
}

fn raw_unit() -> String {
    ModelSizeUnit::RawParamCount.as_str().into()
}

impl ParamFile {
    pub fn from_law(law: &Law) -> Self {
        let b = law.base();
        let (tag, eta, delta) = match law {
            Law::Baseline(_) => (LawTag::Baseline, None, None),
            Law::Distilled(d) => (LawTag::Distilled, Some(d.eta), Some(d.delta)),
        };
        Self {
            format_version: FORMAT_VERSION,
            law: tag,
            metric: b.metric.as_str().into(),
            model_size_unit: b.model_size_unit.as_str().into(),
            asymptote: Some(b.asymptote),
            alpha: b.alpha,
            lambda_p: Some(b.lambda_p),
            beta: b.beta,
            lambda_m: Some(b.lambda_m),
            gamma: b.gamma,
            lambda_f: Some(b.lambda_f),
            eta,
            delta,
            provenance: None,
            fit: None,
        }
    }

    pub fn from_toml(text: &str) -> CliResult<Self> {
        let file: Self = toml::from_str(text).map_err(|e| CliError::input(format!("parameter file: {e}")))?;
        if file.format_version != FORMAT_VERSION {
            return Err(CliError::input(format!("unsupported format_version {}", file.format_version)));
        }
        Ok(file)
    }

    pub fn to_toml(&self) -> CliResult<String> {
        toml::to_string(self).map_err(|e| CliError::input(format!("serializing parameters: {e}")))
    }

    pub fn metric(&self) -> CliResult<MetricKind> {
        MetricKind::parse(&self.metric)
            .ok_or_else(|| CliError::input(format!("metric `{}` is not `error` or `loss`", self.metric)))
    }

    pub fn unit(&self) -> CliResult<ModelSizeUnit> {
        ModelSizeUnit::parse(&self.model_size_unit).ok_or_else(|| {
            CliError::input(format!("model_size_unit `{}` is not `raw`, `millions` or `heads`", self.model_size_unit))
        })
    }

    fn require(&self, name: &str, v: Option<f64>) -> CliResult<f64> {
        v.ok_or_else(|| match self.law {
            LawTag::Baseline => CliError::input(format!("baseline parameters lack `{name}`")),
            LawTag::Distilled => CliError::input(format!(
                "distilled parameters lack `{name}`; exponent-only sets are usable only by check-constraints"
            )),
        })
    }

    fn base(&self) -> CliResult<BaselineLawParams> {
        Ok(BaselineLawParams {
            metric: self.metric()?,
            model_size_unit: self.unit()?,
            asymptote: self.require("asymptote", self.asymptote)?,
            alpha: self.alpha,
            lambda_p: self.require("lambda_p", self.lambda_p)?,
            beta: self.beta,
            lambda_m: self.require("lambda_m", self.lambda_m)?,
            gamma: self.gamma,
            lambda_f: self.require("lambda_f", self.lambda_f)?,
        })
    }

    /// The complete law.
    pub fn to_law(&self) -> CliResult<Law> {
        let law = match self.law {
            LawTag::Baseline => {
                if self.eta.is_some() || self.delta.is_some() {
                    return Err(CliError::input("baseline parameters must not carry `eta` or `delta`"));
                }
                Law::Baseline(self.base()?)
            }
            LawTag::Distilled => Law::Distilled(DistilledLawParams {
                base: self.base()?,
                eta: self.require("eta", self.eta)?,
                delta: self.require("delta", self.delta)?,
            }),
        };
        law.validate()?;
        Ok(law)
    }

    pub fn to_baseline(&self) -> CliResult<BaselineLawParams> {
        match self.to_law()? {
            Law::Baseline(b) => Ok(b),
            Law::Distilled(_) => Err(CliError::input("expected baseline parameters, found a distilled law")),
        }
    }

    pub fn to_distilled(&self) -> CliResult<DistilledLawParams> {
        match self.to_law()? {
            Law::Distilled(d) => Ok(d),
            Law::Baseline(_) => Err(CliError::input("expected distilled parameters, found a baseline law")),
        }
    }

    /// Distilled exponents plus whichever scales are present.
    pub fn to_distilled_coefficients(&self) -> CliResult<DistilledCoefficients> {
        if self.law != LawTag::Distilled {
            return Err(CliError::input("expected distilled parameters, found a baseline law"));
        }
        let coefficients = DistilledCoefficients {
            metric: self.metric()?,
            model_size_unit: self.unit()?,
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
            eta: self.require("eta", self.eta)?,
            asymptote: self.asymptote,
            lambda_m: self.lambda_m,
            lambda_f: self.lambda_f,
        };
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma), ("eta", coefficients.eta)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::input(format!("`{name}` must be positive and finite")));
            }
        }
        Ok(coefficients)
    }
}

/// Reads a parameter file, or a bundled preset when `source` starts with `preset:`.
pub fn load(source: &str) -> CliResult<ParamFile> {
    if let Some(spec) = source.strip_prefix(PRESET_PREFIX) {
        return load_preset(spec);
    }
    let text = std::fs::read_to_string(source).map_err(|e| CliError::input(format!("{source}: {e}")))?;
    ParamFile::from_toml(&text).map_err(|e| CliError::input(format!("{source}: {e}")))
}

pub fn save(file: &ParamFile, path: &Path) -> CliResult<()> {
    std::fs::write(path, file.to_toml()?).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn load_preset(spec: &str) -> CliResult<ParamFile> {
    let bad = || CliError::input(format!("preset `{spec}` is not `<dataset>:<error|loss|distilled>`"));
    let (dataset, kind) = spec.split_once(':').ok_or_else(bad)?;
    let dataset = Dataset::parse(dataset).ok_or_else(|| CliError::input(format!("unknown dataset `{dataset}`")))?;
    let entry = crate::presets::bundled()
        .into_iter()
        .find(|p| {
            p.dataset.eq_ignore_ascii_case(dataset.name())
                && match kind {
                    "distilled" => p.params.law == LawTag::Distilled,
                    metric => p.params.law == LawTag::Baseline && p.params.metric == metric,
                }
        })
        .ok_or_else(|| CliError::input(format!("no bundled preset for `{spec}`")))?;
    Ok(entry.params)
}
