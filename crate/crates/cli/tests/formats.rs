use proptest::prelude::*;
use tlscale::grid;
use tlscale::params::{load, FitRecord, LawTag, ParamFile};
use tlscale::presets::bundled;
use tlscale_core::fitting::{Observation, ObservationGrid};
use tlscale_core::laws::{load_presets, PresetLaw};
use tlscale_core::{BaselineLawParams, DistilledLawParams, Law, MetricKind, ModelSizeUnit};

fn positive() -> impl Strategy<Value = f64> {
    prop_oneof![
        (-300.0..300.0f64).prop_map(|e| 10f64.powf(e)),
        (f64::MIN_POSITIVE..f64::MAX),
        Just(f64::MIN_POSITIVE),
        Just(5e-324),
    ]
}

fn law() -> impl Strategy<Value = Law> {
    (
        prop::array::uniform7(positive()),
        prop::option::of((positive(), positive())),
        prop_oneof![Just(MetricKind::ErrorRate), Just(MetricKind::CrossEntropyLoss)],
        prop_oneof![
            Just(ModelSizeUnit::RawParamCount),
            Just(ModelSizeUnit::MillionsOfParams),
            Just(ModelSizeUnit::AttentionHeads)
        ],
        any::<bool>(),
    )
        .prop_map(|(v, teacher, metric, model_size_unit, zero_asymptote)| {
            let base = BaselineLawParams {
                metric,
                model_size_unit,
                asymptote: if zero_asymptote { 0.0 } else { v[0] },
                alpha: v[1],
                lambda_p: v[2],
                beta: v[3],
                lambda_m: v[4],
                gamma: v[5],
                lambda_f: v[6],
            };
            match teacher {
                None => Law::Baseline(base),
                Some((eta, delta)) => Law::Distilled(DistilledLawParams { base, eta, delta }),
            }
        })
}

proptest! {
    #[test]
    fn parameter_file_round_trips_bitwise(law in law(), rmse in positive(), seed in 0..=i64::MAX as u64) {
        let mut file = ParamFile::from_law(&law);
        file.fit = Some(FitRecord { sse: rmse * rmse, rmse, converged: true, seed, start_index: 3, n_iterations: 40 });
        let text = file.to_toml().unwrap();
        let back = ParamFile::from_toml(&text).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(back.to_law().unwrap(), law);
        prop_assert_eq!(back.to_toml().unwrap(), text);
    }

    #[test]
    fn grid_round_trips_bitwise(
        rows in prop::collection::vec((positive(), positive(), positive(), prop::option::of(positive()), 1e-300..1.0f64), 1..40),
        label in "[A-Za-z0-9_]{1,12}",
    ) {
        let obs: Vec<Observation> = rows
            .iter()
            .map(|&(d_p, m, d_f, teacher, value)| Observation { d_p, m, d_f, teacher, metric: MetricKind::ErrorRate, value })
            .collect();
        let g = ObservationGrid::new(label, obs).unwrap();
        let mut buf = Vec::new();
        grid::write(&g, &mut buf).unwrap();
        let back = grid::read(&buf[..]).unwrap();
        prop_assert_eq!(&back, &g);
        let mut again = Vec::new();
        grid::write(&back, &mut again).unwrap();
        prop_assert_eq!(again, buf);
    }
}

#[test]
fn bundled_presets_match_the_core_table() {
    let files = bundled();
    let core = load_presets();
    assert_eq!(files.len(), core.len());
    for (file, preset) in files.iter().zip(core) {
        assert_eq!(file.dataset, preset.dataset.name());
        assert_eq!(file.params.provenance.as_deref(), Some(preset.provenance));
        match preset.law {
            PresetLaw::Baseline(b) => assert_eq!(file.params.to_baseline().unwrap(), b),
            PresetLaw::Distilled(d) => {
                let c = file.params.to_distilled_coefficients().unwrap();
                assert_eq!((c.alpha, c.beta, c.gamma, c.eta), (d.alpha, d.beta, d.gamma, d.eta));
                assert_eq!((c.metric, c.model_size_unit), (d.metric, d.model_size_unit));
                assert!(file.params.to_law().is_err());
            }
        }
    }
}

#[test]
fn preset_lookup_syntax() {
    let p = load("preset:ImageNet100:error").unwrap();
    assert_eq!(p.law, LawTag::Baseline);
    assert_eq!(p.alpha, 0.620);
    assert_eq!(load("preset:TinyImageNet:loss").unwrap().metric, "loss");
    assert_eq!(load("preset:ImageNet100:distilled").unwrap().eta, Some(2.053));
    for bad in ["preset:ImageNet100", "preset:Nowhere:error", "preset:Cifar10:distilled", "preset:ImageNet100:accuracy"] {
        assert!(load(bad).is_err(), "{bad}");
    }
}

#[test]
fn parameter_file_rejections() {
    let ok = "law = \"baseline\"\nmetric = \"error\"\nasymptote = 0.0\nalpha = 1.0\nlambda_p = 1.0\nbeta = 1.0\nlambda_m = 1.0\ngamma = 1.0\nlambda_f = 1.0\n";
    assert!(ParamFile::from_toml(ok).unwrap().to_law().is_ok());
    let cases = [
        format!("{ok}colour = 1\n"),
        format!("format_version = 2\n{ok}"),
        ok.replace("alpha = 1.0", "alpha = -1.0"),
        ok.replace("\"error\"", "\"accuracy\""),
        format!("{ok}eta = 1.0\n"),
        ok.replace("lambda_f = 1.0\n", ""),
    ];
    for text in &cases {
        let r = ParamFile::from_toml(text).and_then(|f| f.to_law());
        assert!(r.is_err(), "accepted:\n{text}");
    }
}

fn read_err(text: &str) -> String {
    grid::read(text.as_bytes()).unwrap_err().message
}

#[test]
fn grid_diagnostics_name_line_and_column() {
    let header = "dataset,d_p,m,d_f,teacher,metric,value\n";
    assert_eq!(read_err(""), "no data rows");
    assert_eq!(read_err(header), "no data rows");
    assert_eq!(read_err(&format!("{header}a,1,1,1,,error,0.5\na,1,1,1,,loss,0.5\n")), "mixed metrics in one grid");
    assert_eq!(read_err(&format!("{header}a,1,x,1,,error,0.5\n")), "line 2, column m: `x` is not a number");
    assert!(read_err(&format!("{header}a,1,1,1,,error,0.5\na,1,1,1,,error,1.5\n")).starts_with("line 3:"));
    assert!(read_err(&format!("{header}a,0,1,1,,error,0.5\n")).starts_with("line 2:"));
    assert!(read_err("d_p,m\n1,2\n").starts_with("line 1: expected header"));
}
