#![allow(dead_code)]

use tlscale_core::laws::Dataset;
use tlscale_core::planner::{build_plan, default_models, estimate_params, ModelSpec, SamplingPlan, DEFAULT_FRACTIONS};
use tlscale_core::{BaselineLawParams, DistilledLawParams, LawInput, MetricKind, ModelSizeUnit};

/// The 196-row plan, every axis divided by its largest value.
pub fn standard_inputs() -> Vec<LawInput> {
    let plan = build_plan(&SamplingPlan::pretraining(), &SamplingPlan::downstream(Dataset::ImageNet100), &default_models()).unwrap();
    plan.normalized_inputs(ModelSizeUnit::RawParamCount, None)
}

fn normalized_counts(plan: &SamplingPlan) -> Vec<f64> {
    let counts: Vec<f64> = DEFAULT_FRACTIONS.iter().map(|&f| plan.sampled_count(f).unwrap() as f64).collect();
    let max = counts.iter().cloned().fold(0.0, f64::max);
    counts.iter().map(|c| c / max).collect()
}

/// 7 pretraining fractions x students {2, 4, 6} heads x 7 fine-tuning
/// fractions x teachers {4, 6, 8} heads; sizes relative to the 8-head model.
pub fn distilled_inputs() -> Vec<LawInput> {
    let d_p = normalized_counts(&SamplingPlan::pretraining());
    let d_f = normalized_counts(&SamplingPlan::downstream(Dataset::ImageNet100));
    let top = estimate_params(&ModelSpec::with_heads(8)) as f64;
    let size = |h: u32| estimate_params(&ModelSpec::with_heads(h)) as f64 / top;
    let mut out = Vec::new();
    for t in [4, 6, 8] {
        for &p in &d_p {
            for s in [2, 4, 6] {
                for &f in &d_f {
                    out.push(LawInput::with_teacher(p, size(s), f, size(t)));
                }
            }
        }
    }
    out
}

/// Geometric mean of the distinct values of one axis.
pub fn geometric_mean(inputs: &[LawInput], axis: fn(&LawInput) -> f64) -> f64 {
    let mut v: Vec<f64> = inputs.iter().map(axis).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    (v.iter().map(|x| x.ln()).sum::<f64>() / v.len() as f64).exp()
}

/// Scale that makes `x^-e / scale == weight` at the axis' geometric mean.
pub fn scale_for(inputs: &[LawInput], axis: fn(&LawInput) -> f64, e: f64, weight: f64) -> f64 {
    geometric_mean(inputs, axis).powf(-e) / weight
}

pub fn baseline_with_weights(
    inputs: &[LawInput],
    metric: MetricKind,
    asymptote: f64,
    exps: [f64; 3],
    weights: [f64; 3],
) -> BaselineLawParams {
    BaselineLawParams {
        metric,
        model_size_unit: ModelSizeUnit::RawParamCount,
        asymptote,
        alpha: exps[0],
        lambda_p: scale_for(inputs, |i| i.d_p, exps[0], weights[0]),
        beta: exps[1],
        lambda_m: scale_for(inputs, |i| i.m, exps[1], weights[1]),
        gamma: exps[2],
        lambda_f: scale_for(inputs, |i| i.d_f, exps[2], weights[2]),
    }
}

/// ImageNet100 error-rate exponents, each term 1/3 at its axis' geometric mean.
/// Values span about three decades, so the grid is labelled as a loss.
pub fn reference_baseline(inputs: &[LawInput]) -> BaselineLawParams {
    baseline_with_weights(inputs, MetricKind::CrossEntropyLoss, 1.44e-14, [0.620, 4.882, 0.377], [1.0 / 3.0; 3])
}

/// ImageNet100 distilled exponents with the same weighting; the teacher term
/// is 1/3 at its geometric mean too.
pub fn reference_distilled(inputs: &[LawInput]) -> DistilledLawParams {
    let base = baseline_with_weights(inputs, MetricKind::CrossEntropyLoss, 1.44e-14, [0.702, 5.840, 0.338], [0.25; 3]);
    let eta = 2.053;
    DistilledLawParams { base, eta, delta: scale_for(inputs, |i| i.teacher.unwrap(), eta, 0.25) }
}

pub fn relative_rmse(a: &[f64], b: &[f64]) -> f64 {
    (a.iter().zip(b).map(|(x, y)| ((x - y) / y).powi(2)).sum::<f64>() / a.len() as f64).sqrt()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
