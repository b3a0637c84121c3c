//! Randomized invariants. Case counts are kept small because each case runs
//! adaptive quadrature; the deterministic suites carry the precision burden.

use convineq::autocorr::{autocorrelation, CorrValue};
use convineq::functionals::{
    sidon_functional, theorem1_functional, theorem2_functional,
};
use convineq::norms::l2_norm;
use convineq::quad::QuadratureConfig;
use convineq::spec::{FunctionSpec, Term};
use proptest::prelude::*;

fn quad() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn g_at(spec: &FunctionSpec, t: f64) -> Option<f64> {
    match autocorrelation(spec, t, &quad()) {
        Ok(CorrValue::Finite { value, .. }) => Some(value),
        _ => None,
    }
}

prop_compose! {
    /// A nonnegative bump: gaussian with positive even polynomial part.
    fn gaussian_term()(a in 0.2f64..20.0, c0 in 0.1f64..3.0, c2 in 0.0f64..3.0) -> Term {
        Term::GaussianPoly { a, coeffs: vec![c0, 0.0, c2] }
    }
}

prop_compose! {
    fn indicator_term()(lo in -2.0f64..1.5, width in 0.05f64..1.5, height in 0.1f64..3.0) -> Term {
        Term::Indicator { lo, hi: lo + width, height }
    }
}

fn nonneg_spec() -> impl Strategy<Value = FunctionSpec> {
    prop::collection::vec(
        prop_oneof![gaussian_term(), indicator_term()],
        1..=3,
    )
    .prop_map(|terms| FunctionSpec::new(terms).expect("generated terms are valid"))
}

fn compact_spec() -> impl Strategy<Value = FunctionSpec> {
    prop::collection::vec(indicator_term(), 1..=3)
        .prop_map(|terms| FunctionSpec::new(terms).expect("generated terms are valid"))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn first_ratio_respects_bound(spec in nonneg_spec()) {
        let report = theorem1_functional(&spec, &quad()).unwrap();
        prop_assert!(report.value <= 0.91, "ratio {} breaks the 0.91 bound", report.value);
        prop_assert!(report.value > 0.0);
    }

    #[test]
    fn second_ratio_respects_bound(spec in compact_spec()) {
        let report = theorem2_functional(&spec, &quad()).unwrap();
        prop_assert!(
            report.value <= 0.411 + 1e-9,
            "ratio {} breaks the 0.411 bound",
            report.value
        );
        prop_assert!(report.value >= 0.0);
    }

    #[test]
    fn correlation_obeys_cauchy_schwarz(spec in nonneg_spec(), t in -2.0f64..2.0) {
        let l2 = l2_norm(&spec, &quad()).unwrap().value;
        if let Some(g) = g_at(&spec, t) {
            prop_assert!(
                g <= l2 * l2 + 1e-8,
                "g({t}) = {g} exceeds the L2 bound {}",
                l2 * l2
            );
        }
    }

    #[test]
    fn correlation_is_even(spec in nonneg_spec(), t in 0.0f64..2.0) {
        let (a, b) = (g_at(&spec, t), g_at(&spec, -t));
        if let (Some(a), Some(b)) = (a, b) {
            prop_assert!((a - b).abs() <= 1e-8 * (1.0 + a.abs()), "g({t}) = {a} vs g(-{t}) = {b}");
        }
    }

    #[test]
    fn first_ratio_is_scale_invariant(
        spec in nonneg_spec(),
        k in 0.2f64..5.0,
    ) {
        let base = theorem1_functional(&spec, &quad()).unwrap().value;
        let scaled = theorem1_functional(&spec.scale(k), &quad()).unwrap().value;
        prop_assert!(
            (base - scaled).abs() <= 1e-6 * (1.0 + base.abs()),
            "scaling by {k} moved the ratio: {base} vs {scaled}"
        );
    }

    #[test]
    fn second_ratio_is_translation_invariant(
        spec in compact_spec(),
        s in -1.0f64..1.0,
    ) {
        let base = theorem2_functional(&spec, &quad()).unwrap().value;
        let shifted = theorem2_functional(&spec.translate(s).unwrap(), &quad()).unwrap().value;
        prop_assert!(
            (base - shifted).abs() <= 1e-6 * (1.0 + base.abs()),
            "translation by {s} moved the ratio: {base} vs {shifted}"
        );
    }

    #[test]
    fn narrow_nonnegative_specs_meet_the_sidon_floor(
        lo in -0.25f64..0.1,
        width in 0.02f64..0.15,
        height in 0.1f64..2.0,
    ) {
        let hi = (lo + width).min(0.25);
        let spec = convineq::spec::indicator(lo, hi, height);
        let report = sidon_functional(&spec, &quad()).unwrap();
        prop_assert!(report.value >= 1.0 - 1e-8, "peak ratio {} below 1", report.value);
    }
}
