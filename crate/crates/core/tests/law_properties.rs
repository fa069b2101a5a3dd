use proptest::prelude::*;
use tlscale_core::{BaselineLawParams, DistilledLawParams, LawInput, MetricKind, ModelSizeUnit};

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

prop_compose! {
    fn baseline(exp_lo: f64)(
        asymptote in 0.0..0.1f64,
        alpha in exp_lo..2.0f64,
        beta in exp_lo..2.0f64,
        gamma in exp_lo..2.0f64,
        lambda_p in log_uniform(1e-2, 1e2),
        lambda_m in log_uniform(1e-2, 1e2),
        lambda_f in log_uniform(1e-2, 1e2),
    ) -> BaselineLawParams {
        BaselineLawParams {
            metric: MetricKind::CrossEntropyLoss,
            model_size_unit: ModelSizeUnit::RawParamCount,
            asymptote, alpha, lambda_p, beta, lambda_m, gamma, lambda_f,
        }
    }
}

prop_compose! {
    fn input()(d_p in log_uniform(1.0, 1e4), m in log_uniform(1.0, 1e4), d_f in log_uniform(1.0, 1e4)) -> LawInput {
        LawInput::new(d_p, m, d_f)
    }
}

proptest! {
    #[test]
    fn strictly_decreasing_in_every_size(p in baseline(0.1), x in input(), k in 1.5..10.0f64, axis in 0..3usize) {
        let mut y = x;
        match axis {
            0 => y.d_p *= k,
            1 => y.m *= k,
            _ => y.d_f *= k,
        }
        prop_assert!(p.eval(&y).unwrap() < p.eval(&x).unwrap());
    }

    #[test]
    fn bounded_below_by_asymptote(p in baseline(0.1), x in input()) {
        prop_assert!(p.eval(&x).unwrap() >= p.asymptote);
    }

    #[test]
    fn power_terms_shrink_at_least_as_fast_as_the_smallest_exponent(p in baseline(0.3), x in input()) {
        let k = 1e12;
        let far = LawInput::new(x.d_p * k, x.m * k, x.d_f * k);
        let near_gap = p.eval(&x).unwrap() - p.asymptote;
        let far_gap = p.eval(&far).unwrap() - p.asymptote;
        let min_e = p.alpha.min(p.beta).min(p.gamma);
        prop_assert!(far_gap <= near_gap * k.powf(-min_e) * (1.0 + 1e-9) + 1e-15 * p.asymptote);
    }

    #[test]
    fn converges_to_asymptote(p in baseline(0.75), x in input()) {
        let k = 1e12;
        let far = LawInput::new(x.d_p * k, x.m * k, x.d_f * k);
        let e1 = p.eval(&x).unwrap();
        prop_assert!((p.eval(&far).unwrap() - p.asymptote).abs() < 1e-9 * e1);
    }

    #[test]
    fn distilled_minus_baseline_is_teacher_term(
        p in baseline(0.1), x in input(), eta in 0.1..3.0f64, delta in log_uniform(1e-2, 1e2), t in log_uniform(1.0, 1e4),
    ) {
        let d = DistilledLawParams { base: p, eta, delta };
        let with_t = LawInput::with_teacher(x.d_p, x.m, x.d_f, t);
        let e2 = d.eval(&with_t).unwrap();
        let diff = e2 - p.eval(&x).unwrap();
        prop_assert!((diff - d.teacher_term(t)).abs() <= 1e-15 * e2);
    }

    #[test]
    fn scale_free_in_relative_error_unit(p in baseline(0.1), x in input()) {
        // Rescaling every inverse scale and the asymptote by c rescales the law by c.
        let c = 3.0;
        let q = BaselineLawParams {
            asymptote: p.asymptote * c,
            lambda_p: p.lambda_p / c,
            lambda_m: p.lambda_m / c,
            lambda_f: p.lambda_f / c,
            ..p
        };
        let (a, b) = (p.eval(&x).unwrap(), q.eval(&x).unwrap());
        prop_assert!((b - c * a).abs() <= 1e-13 * b);
    }
}

#[test]
fn rejects_nonpositive_sizes() {
    let p = BaselineLawParams {
        metric: MetricKind::ErrorRate,
        model_size_unit: ModelSizeUnit::RawParamCount,
        asymptote: 0.0,
        alpha: 1.0,
        lambda_p: 1.0,
        beta: 1.0,
        lambda_m: 1.0,
        gamma: 1.0,
        lambda_f: 1.0,
    };
    for x in [LawInput::new(0.0, 1.0, 1.0), LawInput::new(1.0, -1.0, 1.0), LawInput::new(1.0, 1.0, f64::NAN)] {
        assert!(p.eval(&x).is_err());
    }
}
