use optibandit::radius::{gpucb_beta, heavy_tail_radius, linucb_alpha, RadiusInputs};
use optibandit::{CanonicalRadius, RadiusSpec};
use proptest::prelude::*;

fn inputs(var_est: f64) -> RadiusInputs {
    RadiusInputs { var_est, width: None }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn canonical_radius_shrinks_with_pulls(s2 in 0.0f64..5.0, c1 in 0.0f64..3.0, delta in 1e-9f64..0.9, m in 1u64..1_000_000) {
        let r = CanonicalRadius::new(s2, c1, delta).unwrap();
        prop_assert!(r.radius(m + 1).unwrap() <= r.radius(m).unwrap());
    }

    #[test]
    fn canonical_radius_monotone_in_parameters(s2 in 0.0f64..5.0, c1 in 0.0f64..3.0, delta in 1e-9f64..0.5, m in 1u64..100_000) {
        let base = CanonicalRadius::new(s2, c1, delta).unwrap().radius(m).unwrap();
        prop_assert!(CanonicalRadius::new(s2 * 2.0, c1, delta).unwrap().radius(m).unwrap() >= base);
        prop_assert!(CanonicalRadius::new(s2, c1 + 0.5, delta).unwrap().radius(m).unwrap() >= base);
        prop_assert!(CanonicalRadius::new(s2, c1, delta / 10.0).unwrap().radius(m).unwrap() >= base);
    }

    #[test]
    fn collapse_threshold_postcondition(s2 in 0.0f64..5.0, c1 in 0.0f64..3.0, delta in 1e-12f64..0.9, gap in 1e-3f64..2.0) {
        prop_assume!(s2 > 0.0 || c1 > 0.0);
        let r = CanonicalRadius::new(s2, c1, delta).unwrap();
        let m0 = r.collapse_threshold(gap).unwrap();
        prop_assert!(m0 >= 1);
        prop_assert!(r.radius(m0).unwrap() <= gap / 4.0);
        // every later pull count stays collapsed
        prop_assert!(r.radius(m0 * 3 + 7).unwrap() <= gap / 4.0);
    }

    #[test]
    fn canonical_bounds_dominate(var in 0.0f64..0.25, c in 0.5f64..5.0, d in 0.0f64..3.0, delta in 1e-6f64..0.5, m in 1u64..50_000, t in 2u64..1_000_000) {
        let specs = [
            RadiusSpec::UcbHoeffding { horizon: t },
            RadiusSpec::UcbV { log_level: (t as f64).ln(), c: 3.0, variance_bound: 0.25 },
            RadiusSpec::HeavyTail { c, d, delta },
        ];
        for spec in specs {
            let bound = spec.canonical_bound().unwrap();
            let r = spec.radius(m, inputs(var)).unwrap();
            let b = bound.radius(m).unwrap();
            prop_assert!(r <= b * (1.0 + 1e-12), "{:?}: {} > {}", spec, r, b);
        }
    }

    #[test]
    fn heavy_tail_radius_matches_formula(c in 0.1f64..20.0, d in 0.0f64..5.0, delta in 1e-6f64..0.5, m in 1u64..10_000) {
        let l = (1.0 / delta).ln();
        let expected = c * (l / m as f64).sqrt() + d * l / m as f64;
        prop_assert!((heavy_tail_radius(c, d, delta, m).unwrap() - expected).abs() <= 1e-12 * (1.0 + expected));
    }

    #[test]
    fn structured_confidence_widens_with_horizon(t in 10u64..1_000_000, delta in 1e-6f64..0.5) {
        prop_assert!(linucb_alpha(1.0, 1.0, 0.5, delta, 5, t * 2) >= linucb_alpha(1.0, 1.0, 0.5, delta, 5, t));
        prop_assert!(linucb_alpha(1.0, 1.0, 0.5, delta / 2.0, 5, t) >= linucb_alpha(1.0, 1.0, 0.5, delta, 5, t));
        prop_assert!(gpucb_beta(5, t * 2, delta) > gpucb_beta(5, t, delta));
    }
}

#[test]
fn invalid_parameters_rejected() {
    assert!(CanonicalRadius::new(-0.1, 0.0, 0.1).is_err());
    assert!(CanonicalRadius::new(0.25, -1.0, 0.1).is_err());
    assert!(CanonicalRadius::new(0.25, 0.0, 0.0).is_err());
    assert!(CanonicalRadius::new(0.25, 0.0, 1.0).is_err());
    let r = CanonicalRadius::new(0.25, 0.0, 0.1).unwrap();
    assert!(r.radius(0).is_err());
    assert!(r.collapse_threshold(f64::NAN).is_err());
}

#[test]
fn structured_radii_have_no_threshold() {
    assert!(RadiusSpec::LinUcb { alpha: 1.0 }.canonical_bound().is_none());
    assert!(RadiusSpec::GpUcb { beta: 4.0 }.canonical_bound().is_none());
}
