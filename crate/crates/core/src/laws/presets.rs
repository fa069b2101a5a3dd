//! Published coefficient sets bundled with the crate.
//!
//! Transcribed digit-for-digit. The source does not state the unit of `M`;
//! the presets carry [`ModelSizeUnit::RawParamCount`], under which the model
//! term of the error-rate laws (`beta` near 5) underflows for DeiT-sized
//! models. Distilled presets only publish exponents; their scales must be
//! supplied through [`DistilledPreset::with_scales`].

use super::{BaselineLawParams, DistilledLawParams, MetricKind, ModelSizeUnit};
use crate::error::Result;

/// Downstream datasets with published coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Dataset {
    /// 100-class ImageNet subset.
    ImageNet100,
    /// 200 classes, 64x64.
    TinyImageNet,
    /// 100 classes, 32x32.
    #[cfg_attr(feature = "serde", serde(rename = "CIFAR100"))]
    Cifar100,
    /// 10 classes, 32x32.
    #[cfg_attr(feature = "serde", serde(rename = "CIFAR10"))]
    Cifar10,
}

impl Dataset {
    /// All datasets in bundle order.
    pub const ALL: [Dataset; 4] =
        [Dataset::ImageNet100, Dataset::TinyImageNet, Dataset::Cifar100, Dataset::Cifar10];

    /// Display name as used in files.
    pub fn name(self) -> &'static str {
        match self {
            Dataset::ImageNet100 => "ImageNet100",
            Dataset::TinyImageNet => "TinyImageNet",
            Dataset::Cifar100 => "CIFAR100",
            Dataset::Cifar10 => "CIFAR10",
        }
    }

    /// Case-insensitive inverse of [`Dataset::name`].
    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.name().eq_ignore_ascii_case(s))
    }
}

/// Exponents of a distilled law whose scales were not published.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistilledPreset {
    /// Metric of the fit.
    pub metric: MetricKind,
    /// Unit of `M` and the teacher size.
    pub model_size_unit: ModelSizeUnit,
    /// `alpha'`.
    pub alpha: f64,
    /// `beta'`.
    pub beta: f64,
    /// `gamma'`.
    pub gamma: f64,
    /// `eta'`.
    pub eta: f64,
}

impl DistilledPreset {
    /// Completes the preset with user-supplied asymptote and scales.
    pub fn with_scales(
        &self,
        asymptote: f64,
        lambda_p: f64,
        lambda_m: f64,
        lambda_f: f64,
        delta: f64,
    ) -> Result<DistilledLawParams> {
        let params = DistilledLawParams {
            base: BaselineLawParams {
                metric: self.metric,
                model_size_unit: self.model_size_unit,
                asymptote,
                alpha: self.alpha,
                lambda_p,
                beta: self.beta,
                lambda_m,
                gamma: self.gamma,
                lambda_f,
            },
            eta: self.eta,
            delta,
        };
        params.validate()?;
        Ok(params)
    }
}

/// The coefficients a preset holds.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PresetLaw {
    /// Complete baseline law.
    Baseline(BaselineLawParams),
    /// Distilled exponents only.
    Distilled(DistilledPreset),
}

impl PresetLaw {
    /// Metric of the preset.
    pub fn metric(&self) -> MetricKind {
        match self {
            PresetLaw::Baseline(p) => p.metric,
            PresetLaw::Distilled(p) => p.metric,
        }
    }
}

/// One bundled coefficient set.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CoefficientPreset {
    /// Downstream dataset.
    pub dataset: Dataset,
    /// The coefficients.
    pub law: PresetLaw,
    /// Where the numbers come from.
    pub provenance: &'static str,
}

const BASELINE_ERROR_SOURCE: &str =
    "published error-rate fit: exponents table + fitted coefficients table";
const BASELINE_LOSS_SOURCE: &str =
    "published cross-entropy fit: exponents table + fitted coefficients table";
const DISTILLED_SOURCE: &str =
    "published distilled exponents; scales not published, user-supplied required";

#[allow(clippy::too_many_arguments)]
const fn baseline(
    dataset: Dataset,
    metric: MetricKind,
    alpha: f64,
    beta: f64,
    gamma: f64,
    asymptote: f64,
    lambda_p: f64,
    lambda_m: f64,
    lambda_f: f64,
) -> CoefficientPreset {
    CoefficientPreset {
        dataset,
        law: PresetLaw::Baseline(BaselineLawParams {
            metric,
            model_size_unit: ModelSizeUnit::RawParamCount,
            asymptote,
            alpha,
            lambda_p,
            beta,
            lambda_m,
            gamma,
            lambda_f,
        }),
        provenance: match metric {
            MetricKind::ErrorRate => BASELINE_ERROR_SOURCE,
            MetricKind::CrossEntropyLoss => BASELINE_LOSS_SOURCE,
        },
    }
}

const fn distilled(dataset: Dataset, alpha: f64, beta: f64, gamma: f64, eta: f64) -> CoefficientPreset {
    CoefficientPreset {
        dataset,
        law: PresetLaw::Distilled(DistilledPreset {
            metric: MetricKind::ErrorRate,
            model_size_unit: ModelSizeUnit::RawParamCount,
            alpha,
            beta,
            gamma,
            eta,
        }),
        provenance: DISTILLED_SOURCE,
    }
}

use Dataset::*;
use MetricKind::{CrossEntropyLoss as Loss, ErrorRate as Err};

static PRESETS: [CoefficientPreset; 10] = [
    //                         alpha   beta    gamma  asymptote  lambda_p  lambda_m  lambda_f
    baseline(ImageNet100, Err, 0.620, 4.882, 0.377, 1.44e-14, 4.39e-3, 3.05e-2, 1.79e-1),
    baseline(TinyImageNet, Err, 0.412, 5.086, 0.359, 1.76e-27, 2.58e-2, 4.55e-1, 1.44e-1),
    baseline(Cifar100, Err, 0.609, 1.797, 0.587, 2.55e-15, 3.83e-3, 2.60e-6, 3.45e-2),
    baseline(Cifar10, Err, 10.129, 4.975, 0.331, 2.17e-10, 1.84e+0, 1.22e+0, 5.53e-1),
    baseline(ImageNet100, Loss, 0.597, 0.854, 0.443, 1.98e-05, 1.18e-3, 1.15e-5, 2.58e-2),
    baseline(TinyImageNet, Loss, 0.433, 0.815, 0.438, 1.39e-05, 4.72e-3, 1.3e-5, 1.62e-2),
    baseline(Cifar100, Loss, 0.592, 0.865, 0.603, 2.68e-05, 1.14e-3, 6.25e-6, 7.30e-3),
    baseline(Cifar10, Loss, 0.667, 25.435, 0.391, 1.38e-13, 1.23e-3, 1.01e-2, 1.37e-1),
    //                    alpha'  beta'  gamma'  eta'
    distilled(ImageNet100, 0.702, 5.840, 0.338, 2.053),
    distilled(TinyImageNet, 0.475, 5.496, 0.321, 1.982),
];

/// The bundled presets: four baseline error-rate, four baseline loss and two
/// distilled (exponent-only) sets.
pub fn load_presets() -> &'static [CoefficientPreset] {
    &PRESETS
}

/// Baseline preset for `dataset` and `metric`.
pub fn lookup_baseline(dataset: Dataset, metric: MetricKind) -> Option<&'static BaselineLawParams> {
    PRESETS.iter().find_map(|p| match &p.law {
        PresetLaw::Baseline(b) if p.dataset == dataset && b.metric == metric => Some(b),
        _ => None,
    })
}

/// Distilled (exponent-only) preset for `dataset`.
pub fn lookup_distilled(dataset: Dataset) -> Option<&'static DistilledPreset> {
    PRESETS.iter().find_map(|p| match &p.law {
        PresetLaw::Distilled(d) if p.dataset == dataset => Some(d),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn bundle_counts_and_uniqueness() {
        let all = load_presets();
        let count = |f: &dyn Fn(&CoefficientPreset) -> bool| all.iter().filter(|p| f(p)).count();
        assert_eq!(count(&|p| matches!(p.law, PresetLaw::Baseline(b) if b.metric == Err)), 4);
        assert_eq!(count(&|p| matches!(p.law, PresetLaw::Baseline(b) if b.metric == Loss)), 4);
        assert_eq!(count(&|p| matches!(p.law, PresetLaw::Distilled(_))), 2);

        let keys: Vec<_> = all
            .iter()
            .map(|p| (p.dataset, matches!(p.law, PresetLaw::Distilled(_)), p.law.metric()))
            .collect();
        for (i, k) in keys.iter().enumerate() {
            assert!(!keys[i + 1..].contains(k));
        }
        for p in all {
            if let PresetLaw::Baseline(b) = p.law {
                b.validate().unwrap();
            }
        }
    }

    #[test]
    fn transcribed_values() {
        assert_eq!(lookup_baseline(ImageNet100, Err).unwrap().alpha, 0.620);
        assert_eq!(lookup_distilled(TinyImageNet).unwrap().eta, 1.982);
        assert_eq!(lookup_baseline(Cifar10, Loss).unwrap().asymptote, 1.38e-13);
        assert_eq!(lookup_baseline(Cifar10, Err).unwrap().alpha, 10.129);
        assert_eq!(lookup_baseline(Cifar10, Loss).unwrap().beta, 25.435);
        assert_eq!(lookup_baseline(Cifar100, Err).unwrap().lambda_m, 2.60e-6);
        assert_eq!(lookup_baseline(TinyImageNet, Err).unwrap().beta, 5.086);
        assert!(lookup_distilled(Cifar10).is_none());
    }

    #[test]
    fn distilled_scales_must_be_supplied_and_valid() {
        let d = lookup_distilled(ImageNet100).unwrap();
        assert!(d.with_scales(0.0, 4.39e-3, 3.05e-2, 1.79e-1, 0.0).is_err());
        let full = d.with_scales(0.0, 4.39e-3, 3.05e-2, 1.79e-1, 1.0).unwrap();
        assert_eq!(full.base.beta, 5.840);
    }

    #[test]
    fn dataset_names_round_trip() {
        for d in Dataset::ALL {
            assert_eq!(Dataset::parse(d.name()), Some(d));
        }
        assert_eq!(Dataset::parse("cifar10"), Some(Cifar10));
    }
}
