use optibandit::policy::{run_episode, BanditTrace, PerturbSpec};
use optibandit::verify::{coverage_estimate, verify_trace, MAX_LISTED_VIOLATIONS};
use optibandit::{CanonicalRadius, Environment, EstimatorSpec, PolicySpec, RadiusSpec};

fn spec(s2: f64, delta: f64, k: usize) -> PolicySpec {
    PolicySpec::uniform(
        EstimatorSpec::EmpiricalMean,
        RadiusSpec::Canonical(CanonicalRadius::new(s2, 0.0, delta).unwrap()),
        k,
    )
}

// a radius far below the noise level, so the good event fails and arms run past m0
fn under_covering() -> (Environment, BanditTrace) {
    let env = Environment::gaussian(&[0.8, 0.55], 1.0).unwrap();
    for rep in 0..64 {
        let trace = run_episode(&spec(0.002, 0.2, 2), &env, 3000, 3, rep).unwrap();
        let report = verify_trace(&trace, &env).unwrap();
        if report.deviation.arms.iter().any(|a| !a.checks.is_empty()) {
            return (env, trace);
        }
    }
    panic!("no replication pulled the suboptimal arm past its threshold");
}

#[test]
fn good_event_violation_is_reported() {
    let (env, trace) = under_covering();
    let report = verify_trace(&trace, &env).unwrap();
    assert!(!report.good_event.holds);
    assert!(report.good_event.violation_count > 0);
    assert!(report.good_event.violations.len() <= MAX_LISTED_VIOLATIONS);
    let v = &report.good_event.violations[0];
    assert!(v.deviation > v.radius);
    // off the good event the pull-threshold check is vacuous; consistency still holds
    assert!(report.pulls_within_threshold);
    assert!(report.consistency.consistent);
    assert!(report.deviation.all_pass);
    assert!(report.deterministic_pass());
}

#[test]
fn fabricated_deviation_counterexample_is_caught() {
    let (env, mut trace) = under_covering();
    let report = verify_trace(&trace, &env).unwrap();
    let visits: usize = report.deviation.arms.iter().map(|a| a.checks.len()).sum();
    assert!(visits > 0, "the fixture must pull an arm past its threshold");
    // claim every estimate was exact: a suboptimal pull past m0 is then impossible
    let means = env.means();
    for t in 2..trace.len() {
        for (i, &mu) in means.iter().enumerate() {
            trace.estimates[t * 2 + i] = mu;
        }
    }
    let forged = verify_trace(&trace, &env).unwrap();
    assert!(!forged.deviation.all_pass);
    assert!(!forged.consistency.consistent);
    assert!(!forged.deterministic_pass());
}

#[test]
fn corrupted_columns_are_detected() {
    let env = Environment::bernoulli(&[0.7, 0.5, 0.2]).unwrap();
    let clean = run_episode(&spec(0.25, 0.01, 3), &env, 500, 9, 1).unwrap();
    assert!(verify_trace(&clean, &env).unwrap().consistency.consistent);

    let mut t = clean.clone();
    t.estimates[100 * 3 + 1] += 2e-9;
    let r = verify_trace(&t, &env).unwrap();
    assert!(!r.consistency.consistent);
    assert_eq!(r.consistency.mismatches[0].time, 100);

    let mut t = clean.clone();
    t.radii[200 * 3 + 2] *= 1.0 + 1e-6;
    assert!(!verify_trace(&t, &env).unwrap().consistency.consistent);

    let mut t = clean.clone();
    t.pull_count_before[300] += 1;
    assert!(!verify_trace(&t, &env).unwrap().consistency.consistent);

    let mut t = clean.clone();
    t.env_id = "0000000000000000".into();
    assert!(!verify_trace(&t, &env).unwrap().consistency.consistent);

    // perturbations larger than rho
    let pspec = spec(0.25, 0.01, 3).with_perturbation(PerturbSpec::uniform(0.01));
    let mut t = run_episode(&pspec, &env, 500, 9, 1).unwrap();
    let cell = 50 * 3;
    t.indices[cell] += 0.5 - t.perturbations[cell];
    t.perturbations[cell] = 0.5;
    assert!(!verify_trace(&t, &env).unwrap().consistency.consistent);
}

#[test]
fn regret_is_sum_of_step_gaps() {
    let env = Environment::bernoulli(&[0.6, 0.5, 0.45, 0.1]).unwrap();
    let trace = run_episode(&spec(0.25, 0.05, 4), &env, 5000, 2, 0).unwrap();
    let gaps = env.gap_profile().gaps;
    let stepwise: f64 = trace.arms.iter().map(|&a| gaps[a]).sum();
    let report = verify_trace(&trace, &env).unwrap();
    assert!((report.regret.regret - stepwise).abs() <= 1e-9 * stepwise.max(1.0));
}

#[test]
fn coverage_shrinks_as_radius_widens() {
    let env = Environment::bernoulli(&[0.5, 0.5]).unwrap();
    let freq = |s2: f64| {
        let r = RadiusSpec::Canonical(CanonicalRadius::new(s2, 0.0, 0.05).unwrap());
        coverage_estimate(EstimatorSpec::EmpiricalMean, r, &env, 0, 300, 2000, 17)
            .unwrap()
            .frequency
    };
    let (a, b, c) = (freq(0.05), freq(0.25), freq(1.0));
    assert!(a >= b && b >= c, "{a} {b} {c}");
    assert!(a > c);
}

#[test]
fn coverage_rejects_structured_pairs() {
    let env = Environment::bernoulli(&[0.5, 0.5]).unwrap();
    assert!(coverage_estimate(EstimatorSpec::Ridge { lambda: 1.0 }, RadiusSpec::LinUcb { alpha: 1.0 }, &env, 0, 10, 10, 1).is_err());
    let r = RadiusSpec::UcbHoeffding { horizon: 10 };
    assert!(coverage_estimate(EstimatorSpec::EmpiricalMean, r, &env, 0, 10, 0, 1).is_err());
}
