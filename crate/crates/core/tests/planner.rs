use proptest::prelude::*;
use tlscale_core::laws::{lookup_baseline, Dataset};
use tlscale_core::planner::{
    build_plan, default_models, estimate_params, synthesize, ModelSpec, SamplingPlan, SynthesisSpec, DEFAULT_FRACTIONS,
    PRETRAINING_CLASSES, PRETRAINING_EXAMPLES,
};
use tlscale_core::{Law, MetricKind, ModelSizeUnit};

fn fraction_list() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::btree_set(1..=100u32, 1..8).prop_map(|s| s.into_iter().map(|p| p as f64 / 100.0).collect())
}

proptest! {
    #[test]
    fn cardinality_is_the_cross_product(up in fraction_list(), down in fraction_list(), heads in prop::collection::vec(1..16u32, 1..5)) {
        let models: Vec<ModelSpec> = heads.iter().map(|&h| ModelSpec::with_heads(h)).collect();
        let plan = build_plan(
            &SamplingPlan::pretraining().with_fractions(up.clone()),
            &SamplingPlan::downstream(Dataset::Cifar100).with_fractions(down.clone()),
            &models,
        ).unwrap();
        prop_assert_eq!(plan.rows.len(), up.len() * down.len() * models.len());
    }

    #[test]
    fn every_class_contributes_equally(size in 1000..2_000_000u64, classes in 1..2000u64, f in 0.01..=1.0f64) {
        let plan = SamplingPlan::new(size, classes);
        prop_assume!(plan.per_class() as f64 * f >= 1.0);
        let n = plan.sampled_count(f).unwrap();
        prop_assert_eq!(n % classes, 0);
        prop_assert!(n / classes <= plan.per_class());
        prop_assert_eq!(n / classes, (f * plan.per_class() as f64 * (1.0 + 1e-12)).floor() as u64);
    }

    #[test]
    fn parameter_estimate_is_strictly_increasing(h in 1..64u64, d in 1..256u64, l in 1..48u64) {
        let base = ModelSpec { heads: h as u32, head_dim: d as u32, depth: l as u32 };
        let p = estimate_params(&base);
        let wider = ModelSpec { heads: base.heads + 1, ..base };
        let broader = ModelSpec { head_dim: base.head_dim + 1, ..base };
        let deeper = ModelSpec { depth: base.depth + 1, ..base };
        for bigger in [wider, broader, deeper] {
            prop_assert!(estimate_params(&bigger) > p);
        }
    }

    #[test]
    fn synthesis_is_reproducible(seed in any::<u64>(), sigma in 0.0..0.05f64) {
        let law = Law::Baseline(*lookup_baseline(Dataset::ImageNet100, MetricKind::CrossEntropyLoss).unwrap());
        let plan = build_plan(&SamplingPlan::pretraining(), &SamplingPlan::downstream(Dataset::ImageNet100), &default_models()).unwrap();
        let spec = SynthesisSpec {
            generator: law,
            grid: plan.law_inputs(ModelSizeUnit::RawParamCount, None),
            noise_sigma_relative: sigma,
            seed,
            dataset_label: "x".into(),
        };
        let a = synthesize(&spec).unwrap();
        let b = synthesize(&spec).unwrap();
        prop_assert!(a.rows().iter().zip(b.rows()).all(|(x, y)| x.value.to_bits() == y.value.to_bits()));
    }
}

#[test]
fn default_plan_anchors() {
    let plan = build_plan(&SamplingPlan::pretraining(), &SamplingPlan::downstream(Dataset::ImageNet100), &default_models()).unwrap();
    assert_eq!(plan.rows.len(), DEFAULT_FRACTIONS.len().pow(2) * 4);
    assert_eq!(plan.rows.len(), 196);
    assert_eq!(plan.rows.iter().map(|r| r.d_p).min(), Some(64_000));
    assert_eq!(plan.rows.iter().map(|r| r.d_p).max(), Some(1_281_000));
    assert_eq!(PRETRAINING_EXAMPLES / PRETRAINING_CLASSES, 1281);
    assert_eq!(estimate_params(&ModelSpec::with_heads(2)), 2_359_296);
    assert_eq!(estimate_params(&ModelSpec::with_heads(8)), 37_748_736);
    assert_eq!(estimate_params(&ModelSpec { heads: 1, head_dim: 1, depth: 1 }), 12);
}

#[test]
fn noise_free_synthesis_is_the_law() {
    let law = Law::Baseline(*lookup_baseline(Dataset::ImageNet100, MetricKind::ErrorRate).unwrap());
    let plan = build_plan(&SamplingPlan::pretraining(), &SamplingPlan::downstream(Dataset::ImageNet100), &default_models()).unwrap();
    let inputs = plan.law_inputs(ModelSizeUnit::RawParamCount, None);
    let grid = synthesize(&SynthesisSpec {
        generator: law,
        grid: inputs.clone(),
        noise_sigma_relative: 0.0,
        seed: 5,
        dataset_label: "ImageNet100".into(),
    })
    .unwrap();
    for (o, i) in grid.rows().iter().zip(&inputs) {
        assert_eq!(o.value, law.eval(i).unwrap());
    }
}
