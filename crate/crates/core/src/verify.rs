//! Trace-level checks of the regret analysis.
//!
//! Everything here is a pure function of `(trace, environment)`. Estimates and
//! radii are recomputed by feeding the trace's raw rewards through a fresh
//! estimator bank; the recorded columns are only trusted after
//! [`check_consistency`] has matched them against that recomputation.
//!
//! Implication checks for forced deviations read the recorded decision-time
//! estimates. For a suboptimal arm `i` with threshold `m0`, every visit
//! `m >= m0 + 1` must come with `|mu_hat_i(m-1) - mu_i| >= gap/4` or some
//! recorded estimate of the best arm off by at least `gap/4` (`gap/8` for a
//! perturbed policy whose `rho <= gap/8`).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::env::{Environment, GapProfile};
use crate::error::{Error, Result};
use crate::estimators::{EstimatorBank, EstimatorSpec};
use crate::policy::{decision_values, env_id, select_arm, BanditTrace, PolicySpec};
use crate::radius::{CanonicalRadius, CollapseThreshold, RadiusInputs, RadiusSpec};
use crate::rng::arm_stream;

/// Absolute tolerance for recorded-versus-recomputed columns.
pub const RECOMPUTE_TOLERANCE: f64 = 1e-9;

/// Violations kept verbatim in a report; the count is always exact.
pub const MAX_LISTED_VIOLATIONS: usize = 256;

fn same(a: f64, b: f64) -> bool {
    (a.is_nan() && b.is_nan()) || (a - b).abs() <= RECOMPUTE_TOLERANCE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub arm: usize,
    /// Pull count `m` the estimate was built from.
    pub pulls: u64,
    /// Decision time, for shared-state estimators indexed by time.
    pub time: Option<u64>,
    pub deviation: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoodEventReport {
    pub holds: bool,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub time: u64,
    pub arm: Option<usize>,
    pub column: String,
    pub recorded: f64,
    pub recomputed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub mismatch_count: u64,
    pub mismatches: Vec<Mismatch>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImplicationCheck {
    pub visit: u64,
    pub time: u64,
    pub deviation_i: bool,
    /// Some recorded estimate of the best arm deviates by the threshold.
    pub deviation_star: bool,
    /// The best arm's estimate at this very decision deviates.
    pub deviation_star_at_decision: bool,
    /// Recorded radius at this decision was `<= gap/4`.
    pub premise_holds: bool,
}

impl ImplicationCheck {
    pub fn passes(&self) -> bool {
        self.deviation_i || self.deviation_star
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmDeviation {
    pub arm: usize,
    pub m0: u64,
    pub gap: f64,
    pub deviation_threshold: f64,
    pub checks: Vec<ImplicationCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub arms: Vec<ArmDeviation>,
    /// Suboptimal arms skipped because `rho > gap/8`.
    pub exempt_arms: Vec<usize>,
    pub all_pass: bool,
    /// Stronger form: the best arm deviates at the same decision.
    pub all_pass_at_decision: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretReport {
    pub horizon: u64,
    pub pull_counts: Vec<u64>,
    pub contributions: Vec<f64>,
    pub regret: f64,
}

/// First pull counts at which an arm's radius fell below `gap/4` and `gap/8`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmCollapse {
    pub arm: usize,
    pub gap: f64,
    pub quarter_gap_pulls: Option<u64>,
    pub eighth_gap_pulls: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub replication: u64,
    pub seed: u64,
    pub horizon: u64,
    pub env_id: String,
    pub thresholds: Vec<CollapseThreshold>,
    pub consistency: ConsistencyReport,
    pub good_event: GoodEventReport,
    pub deviation: DeviationReport,
    pub pulls_within_threshold: bool,
    pub regret: RegretReport,
    pub collapse: Vec<ArmCollapse>,
}

impl VerificationReport {
    /// All exact (non-statistical) checks passed.
    pub fn deterministic_pass(&self) -> bool {
        self.consistency.consistent && self.deviation.all_pass && self.pulls_within_threshold
    }
}

/// Estimates and radii recomputed from raw rewards.
#[derive(Debug, Clone)]
pub struct Replay {
    num_arms: usize,
    /// Decision-time values, `T + 1` rows (the last one after the final pull).
    pub estimates: Vec<f64>,
    pub radii: Vec<f64>,
    /// Per-arm `(m, mu_hat(m), r(m))` for every pull count reached; only for
    /// per-arm estimators.
    pub paths: Vec<Vec<(u64, f64, f64)>>,
}

impl Replay {
    pub fn estimates_at(&self, t: usize) -> &[f64] {
        &self.estimates[t * self.num_arms..(t + 1) * self.num_arms]
    }

    pub fn radii_at(&self, t: usize) -> &[f64] {
        &self.radii[t * self.num_arms..(t + 1) * self.num_arms]
    }
}

fn check_shape(trace: &BanditTrace, env: &Environment) -> Result<()> {
    if trace.num_arms != env.num_arms() {
        return Err(Error::input(format!(
            "trace has {} arms but environment has {}",
            trace.num_arms,
            env.num_arms()
        )));
    }
    let t = trace.len();
    let k = trace.num_arms;
    if trace.rewards.len() != t
        || trace.pull_count_before.len() != t
        || trace.estimates.len() != t * k
        || trace.radii.len() != t * k
        || trace.indices.len() != t * k
        || trace.perturbations.len() != t * k
    {
        return Err(Error::input("trace columns have inconsistent lengths"));
    }
    if trace.arms.iter().any(|&a| a >= k) {
        return Err(Error::input("trace names an arm outside the environment"));
    }
    Ok(())
}

pub fn replay(trace: &BanditTrace, env: &Environment) -> Result<Replay> {
    check_shape(trace, env)?;
    let k = env.num_arms();
    let spec = &trace.spec;
    spec.validate(env)?;
    let per_arm = spec.estimator.is_per_arm();
    let mut bank = EstimatorBank::new(spec.estimator, env)?;
    let rows = trace.len() + 1;
    let mut estimates = vec![0.0; rows * k];
    let mut radii = vec![0.0; rows * k];
    let mut paths = vec![Vec::new(); if per_arm { k } else { 0 }];
    for t in 0..rows {
        let (e, r) = (&mut estimates[t * k..(t + 1) * k], &mut radii[t * k..(t + 1) * k]);
        decision_values(&bank, &spec.radii, e, r)?;
        if t == trace.len() {
            break;
        }
        let arm = trace.arms[t];
        bank.observe(arm, trace.rewards[t])?;
        if per_arm {
            let m = bank.pulls(arm);
            let inputs = RadiusInputs {
                var_est: bank.variance(arm),
                width: None,
            };
            paths[arm].push((m, bank.value(arm)?, spec.radii[arm].radius(m, inputs)?));
        }
    }
    Ok(Replay {
        num_arms: k,
        estimates,
        radii,
        paths,
    })
}

/// Matches every recorded column against recomputation and re-derives each
/// decision.
pub fn check_consistency(trace: &BanditTrace, env: &Environment, replayed: &Replay) -> ConsistencyReport {
    let mut mismatches = Vec::new();
    let mut count = 0u64;
    let mut note = |m: Mismatch| {
        count += 1;
        if mismatches.len() < MAX_LISTED_VIOLATIONS {
            mismatches.push(m);
        }
    };
    if trace.env_id != env_id(env) {
        note(Mismatch {
            time: 0,
            arm: None,
            column: "env_id".into(),
            recorded: f64::NAN,
            recomputed: f64::NAN,
        });
    }
    let k = trace.num_arms;
    let rho = trace.spec.rho();
    let mut counts = vec![0u64; k];
    for t in 0..trace.len() {
        let (est, rad) = (trace.estimates_at(t), trace.radii_at(t));
        let (idx, xi) = (trace.indices_at(t), trace.perturbations_at(t));
        for i in 0..k {
            for (column, recorded, recomputed) in [
                ("estimate", est[i], replayed.estimates_at(t)[i]),
                ("radius", rad[i], replayed.radii_at(t)[i]),
                ("index", idx[i], est[i] + rad[i] + xi[i]),
            ] {
                if !same(recorded, recomputed) {
                    note(Mismatch {
                        time: t as u64,
                        arm: Some(i),
                        column: column.into(),
                        recorded,
                        recomputed,
                    });
                }
            }
            if !(xi[i].abs() <= rho) {
                note(Mismatch {
                    time: t as u64,
                    arm: Some(i),
                    column: "xi".into(),
                    recorded: xi[i],
                    recomputed: rho,
                });
            }
        }
        let arm = trace.arms[t];
        let expected = if t < k { Ok(t) } else { select_arm(idx) };
        if expected.as_ref().ok() != Some(&arm) {
            note(Mismatch {
                time: t as u64,
                arm: Some(arm),
                column: "arm".into(),
                recorded: arm as f64,
                recomputed: expected.map_or(f64::NAN, |a| a as f64),
            });
        }
        if trace.pull_count_before[t] != counts[arm] {
            note(Mismatch {
                time: t as u64,
                arm: Some(arm),
                column: "pull_count_before".into(),
                recorded: trace.pull_count_before[t] as f64,
                recomputed: counts[arm] as f64,
            });
        }
        counts[arm] += 1;
    }
    ConsistencyReport {
        consistent: count == 0,
        mismatch_count: count,
        mismatches,
    }
}

/// Good event: every estimate within its radius at every pull count reached
/// (per-arm estimators) or at every decision time (shared estimators).
/// Violations are strict: `|mu_hat - mu| > r`.
pub fn check_good_event(trace: &BanditTrace, env: &Environment, replayed: &Replay) -> Result<GoodEventReport> {
    check_shape(trace, env)?;
    let means = env.means();
    let mut violations = Vec::new();
    let mut count = 0u64;
    let mut note = |v: Violation| {
        count += 1;
        if violations.len() < MAX_LISTED_VIOLATIONS {
            violations.push(v);
        }
    };
    if trace.spec.estimator.is_per_arm() {
        for (arm, path) in replayed.paths.iter().enumerate() {
            for &(m, est, r) in path {
                let dev = (est - means[arm]).abs();
                if dev > r {
                    note(Violation {
                        arm,
                        pulls: m,
                        time: None,
                        deviation: dev,
                        radius: r,
                    });
                }
            }
        }
    } else {
        let mut counts = vec![0u64; env.num_arms()];
        for t in 0..=trace.len() {
            let (est, rad) = (replayed.estimates_at(t), replayed.radii_at(t));
            for arm in 0..env.num_arms() {
                let dev = (est[arm] - means[arm]).abs();
                if dev > rad[arm] {
                    note(Violation {
                        arm,
                        pulls: counts[arm],
                        time: Some(t as u64),
                        deviation: dev,
                        radius: rad[arm],
                    });
                }
            }
            if t < trace.len() {
                counts[trace.arms[t]] += 1;
            }
        }
    }
    Ok(GoodEventReport {
        holds: count == 0,
        violation_count: count,
        violations,
    })
}

/// `m0` for every suboptimal arm whose radius has a canonical bound.
pub fn thresholds(env: &Environment, spec: &PolicySpec) -> Result<Vec<CollapseThreshold>> {
    let gaps = env.gap_profile().gaps;
    let mut out = Vec::new();
    for (arm, (&gap, radius)) in gaps.iter().zip(&spec.radii).enumerate() {
        if gap > 0.0 {
            if let Some(bound) = radius.canonical_bound() {
                out.push(CollapseThreshold::compute(arm, &bound, gap)?);
            }
        }
    }
    Ok(out)
}

/// `r(m0) <= gap / 4`; with monotonicity this covers every `m >= m0`.
pub fn check_collapse(spec: &CanonicalRadius, gap: f64, m0: u64) -> bool {
    m0 >= 1 && spec.radius(m0).is_ok_and(|r| r <= gap / 4.0)
}

pub fn check_deviation(
    trace: &BanditTrace,
    env: &Environment,
    thresholds: &[CollapseThreshold],
) -> Result<DeviationReport> {
    check_shape(trace, env)?;
    let GapProfile { mu_star, i_star, .. } = env.gap_profile();
    let k = trace.num_arms;
    let rho = trace.spec.rho();
    let start = k.min(trace.len());

    // largest recorded deviation of the best arm's estimate
    let star_dev = |t: usize| (trace.estimates_at(t)[i_star] - mu_star).abs();
    let max_star_dev = (start..trace.len())
        .map(star_dev)
        .filter(|d| !d.is_nan())
        .fold(0.0, f64::max);

    let mut arms = Vec::new();
    let mut exempt_arms = Vec::new();
    for th in thresholds {
        let i = th.arm;
        if i >= k {
            return Err(Error::input(format!("threshold names arm {i} outside the trace")));
        }
        let deviation_threshold = if rho > 0.0 {
            if rho > th.gap / 8.0 {
                exempt_arms.push(i);
                continue;
            }
            th.gap / 8.0
        } else {
            th.gap / 4.0
        };
        let mut checks = Vec::new();
        for t in start..trace.len() {
            if trace.arms[t] != i {
                continue;
            }
            let visit = trace.pull_count_before[t] + 1;
            if visit < th.m0 + 1 {
                continue;
            }
            let est_i = trace.estimates_at(t)[i];
            if est_i.is_nan() {
                return Err(Error::input(format!("missing estimate for arm {i} at time {t}")));
            }
            let dev_now = star_dev(t);
            checks.push(ImplicationCheck {
                visit,
                time: t as u64,
                deviation_i: (est_i - env.true_mean(i)?).abs() >= deviation_threshold,
                deviation_star: max_star_dev >= deviation_threshold,
                deviation_star_at_decision: dev_now >= deviation_threshold,
                premise_holds: trace.radii_at(t)[i] <= th.gap / 4.0,
            });
        }
        arms.push(ArmDeviation {
            arm: i,
            m0: th.m0,
            gap: th.gap,
            deviation_threshold,
            checks,
        });
    }
    let all_pass = arms.iter().all(|a| a.checks.iter().all(ImplicationCheck::passes));
    let all_pass_at_decision = arms
        .iter()
        .all(|a| a.checks.iter().all(|c| c.deviation_i || c.deviation_star_at_decision));
    Ok(DeviationReport {
        arms,
        exempt_arms,
        all_pass,
        all_pass_at_decision,
    })
}

/// On the good event every thresholded arm has `N_i(T) <= m0`; vacuously true
/// off it.
pub fn check_pull_threshold(trace: &BanditTrace, thresholds: &[CollapseThreshold], good: &GoodEventReport) -> bool {
    if !good.holds {
        return true;
    }
    let n = trace.pull_counts();
    thresholds.iter().all(|th| n[th.arm] <= th.m0)
}

/// Pseudo-regret `sum_i gap_i N_i(T)`.
pub fn regret(trace: &BanditTrace, env: &Environment) -> Result<RegretReport> {
    check_shape(trace, env)?;
    let gaps = env.gap_profile().gaps;
    let pull_counts = trace.pull_counts();
    let contributions: Vec<f64> = gaps.iter().zip(&pull_counts).map(|(g, &n)| g * n as f64).collect();
    Ok(RegretReport {
        horizon: trace.len() as u64,
        regret: contributions.iter().sum(),
        pull_counts,
        contributions,
    })
}

fn collapse_visits(trace: &BanditTrace, env: &Environment, replayed: &Replay) -> Vec<ArmCollapse> {
    let gaps = env.gap_profile().gaps;
    let k = trace.num_arms;
    let mut out: Vec<ArmCollapse> = gaps
        .iter()
        .enumerate()
        .filter(|(_, &g)| g > 0.0)
        .map(|(arm, &gap)| ArmCollapse {
            arm,
            gap,
            quarter_gap_pulls: None,
            eighth_gap_pulls: None,
        })
        .collect();
    let mut counts = vec![0u64; k];
    for t in 0..=trace.len() {
        let rad = replayed.radii_at(t);
        for c in out.iter_mut() {
            let r = rad[c.arm];
            if r.is_nan() {
                continue;
            }
            if c.quarter_gap_pulls.is_none() && r <= c.gap / 4.0 {
                c.quarter_gap_pulls = Some(counts[c.arm]);
            }
            if c.eighth_gap_pulls.is_none() && r <= c.gap / 8.0 {
                c.eighth_gap_pulls = Some(counts[c.arm]);
            }
        }
        if t < trace.len() {
            counts[trace.arms[t]] += 1;
        }
    }
    out
}

/// Runs every check on one trace.
pub fn verify_trace(trace: &BanditTrace, env: &Environment) -> Result<VerificationReport> {
    let replayed = replay(trace, env)?;
    let ths = thresholds(env, &trace.spec)?;
    let consistency = check_consistency(trace, env, &replayed);
    let good_event = check_good_event(trace, env, &replayed)?;
    let deviation = check_deviation(trace, env, &ths)?;
    let pulls_within_threshold = check_pull_threshold(trace, &ths, &good_event);
    Ok(VerificationReport {
        replication: trace.replication,
        seed: trace.seed,
        horizon: trace.len() as u64,
        env_id: trace.env_id.clone(),
        thresholds: ths,
        consistency,
        good_event,
        deviation,
        pulls_within_threshold,
        regret: regret(trace, env)?,
        collapse: collapse_visits(trace, env, &replayed),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageResult {
    pub reps: u64,
    pub violations: u64,
    pub frequency: f64,
}

/// Fraction of independent sample paths of length `m_max` from `arm` on which
/// `|mu_hat(m) - mu| > r(m)` for at least one `m`.
pub fn coverage_estimate(
    estimator: EstimatorSpec,
    radius: RadiusSpec,
    env: &Environment,
    arm: usize,
    m_max: u64,
    reps: u64,
    seed: u64,
) -> Result<CoverageResult> {
    if reps == 0 {
        return Err(Error::input("coverage needs at least one replication"));
    }
    if !estimator.is_per_arm() || radius.is_structured() {
        return Err(Error::input("coverage is defined for per-arm estimators and radii"));
    }
    let mu = env.true_mean(arm)?;
    radius.validate()?;
    let bank0 = EstimatorBank::new(estimator, env)?;
    let violations = (0..reps)
        .into_par_iter()
        .map(|rep| -> Result<u64> {
            let mut bank = bank0.clone();
            let mut rng = arm_stream(seed, rep, arm);
            for m in 1..=m_max {
                bank.observe(arm, env.sample_reward(arm, &mut rng)?)?;
                let inputs = RadiusInputs {
                    var_est: bank.variance(arm),
                    width: None,
                };
                if (bank.value(arm)? - mu).abs() > radius.radius(m, inputs)? {
                    return Ok(1);
                }
            }
            Ok(0)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(CoverageResult {
        reps,
        violations,
        frequency: violations as f64 / reps as f64,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub replications: u64,
    pub mean_regret: f64,
    /// Sample standard deviation (zero for one replication).
    pub std_regret: f64,
    pub mean_pulls: Vec<f64>,
    pub good_event_failures: u64,
    pub good_event_failure_frequency: f64,
    /// `m0 + 1` per arm, where a threshold exists.
    pub pull_bounds: Vec<Option<u64>>,
    pub pull_bound_pass: bool,
    pub good_event_max_frequency: Option<f64>,
    pub good_event_pass: bool,
    pub deviation_failures: u64,
    pub threshold_failures: u64,
    pub consistency_failures: u64,
    pub deterministic_pass: bool,
}

pub fn aggregate(reports: &[VerificationReport], good_event_max_frequency: Option<f64>) -> Result<AggregateReport> {
    let r = reports.len();
    if r == 0 {
        return Err(Error::input("cannot aggregate zero replications"));
    }
    let k = reports[0].regret.pull_counts.len();
    if reports.iter().any(|rep| rep.regret.pull_counts.len() != k) {
        return Err(Error::input("replications disagree on the number of arms"));
    }
    let n = r as f64;
    let mean_regret = reports.iter().map(|x| x.regret.regret).sum::<f64>() / n;
    let std_regret = if r > 1 {
        (reports
            .iter()
            .map(|x| (x.regret.regret - mean_regret).powi(2))
            .sum::<f64>()
            / (n - 1.0))
            .sqrt()
    } else {
        0.0
    };
    let mean_pulls: Vec<f64> = (0..k)
        .map(|i| reports.iter().map(|x| x.regret.pull_counts[i] as f64).sum::<f64>() / n)
        .collect();
    let mut pull_bounds = vec![None; k];
    for th in &reports[0].thresholds {
        pull_bounds[th.arm] = Some(th.m0 + 1);
    }
    let pull_bound_pass = pull_bounds
        .iter()
        .zip(&mean_pulls)
        .all(|(b, &m)| b.is_none_or(|b| m <= b as f64));
    let good_event_failures = reports.iter().filter(|x| !x.good_event.holds).count() as u64;
    let freq = good_event_failures as f64 / n;
    let count = |f: fn(&VerificationReport) -> bool| reports.iter().filter(|x| !f(x)).count() as u64;
    let deviation_failures = count(|x| x.deviation.all_pass);
    let threshold_failures = count(|x| x.pulls_within_threshold);
    let consistency_failures = count(|x| x.consistency.consistent);
    Ok(AggregateReport {
        replications: r as u64,
        mean_regret,
        std_regret,
        mean_pulls,
        good_event_failures,
        good_event_failure_frequency: freq,
        pull_bounds,
        pull_bound_pass,
        good_event_max_frequency,
        good_event_pass: good_event_max_frequency.is_none_or(|b| freq <= b),
        deviation_failures,
        threshold_failures,
        consistency_failures,
        deterministic_pass: deviation_failures + threshold_failures + consistency_failures == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::run_episode;
    use std::f64::consts::E;

    fn canonical(sigma_sq: f64, delta: f64) -> RadiusSpec {
        RadiusSpec::Canonical(CanonicalRadius::new(sigma_sq, 0.0, delta).unwrap())
    }

    #[test]
    fn collapse_examples() {
        let s = CanonicalRadius::new(0.25, 0.0, E.recip()).unwrap();
        assert!(check_collapse(&s, 1.0, 32));
        assert!(!check_collapse(&s, 1.0, 2));
        let z = CanonicalRadius::new(0.0, 0.0, 0.5).unwrap();
        assert!(check_collapse(&z, 0.3, 1));
    }

    #[test]
    fn regret_examples() {
        let env = Environment::bernoulli(&[0.5, 0.3, 0.0]).unwrap();
        let spec = PolicySpec::uniform(EstimatorSpec::EmpiricalMean, canonical(0.25, 0.1), 3);
        let trace = run_episode(&spec, &env, 3, 1, 0).unwrap();
        let r = regret(&trace, &env).unwrap();
        assert!((r.regret - 0.7).abs() < 1e-12);

        let env2 = Environment::bernoulli(&[0.9, 0.7]).unwrap();
        let mut t2 = BanditTrace::new(0, 0, &env2, PolicySpec::uniform(EstimatorSpec::EmpiricalMean, canonical(0.25, 0.1), 2));
        for step in 0..60 {
            t2.arms.push(if step < 50 { 1 } else { 0 });
        }
        t2.rewards = vec![0.0; 60];
        t2.pull_count_before = vec![0; 60];
        for col in [&mut t2.estimates, &mut t2.radii, &mut t2.indices, &mut t2.perturbations] {
            *col = vec![0.0; 120];
        }
        let r = regret(&t2, &env2).unwrap();
        assert!((r.regret - 10.0).abs() < 1e-9);
    }

    #[test]
    fn zero_noise_run_passes_everything() {
        let env = Environment::gaussian(&[0.9, 0.7], 0.0).unwrap();
        let spec = PolicySpec::uniform(EstimatorSpec::EmpiricalMean, canonical(0.25, 0.01), 2);
        let trace = run_episode(&spec, &env, 100, 3, 0).unwrap();
        let rep = verify_trace(&trace, &env).unwrap();
        assert!(rep.good_event.holds);
        assert!(rep.consistency.consistent);
        assert!(rep.deviation.all_pass);
        assert!(rep.pulls_within_threshold);
        let m0 = rep.thresholds[0].m0;
        assert!(rep.regret.pull_counts[1] <= m0 + 1);
    }

    #[test]
    fn aggregate_means() {
        let env = Environment::bernoulli(&[0.9, 0.7]).unwrap();
        let spec = PolicySpec::uniform(EstimatorSpec::EmpiricalMean, canonical(0.25, 0.01), 2);
        let a = verify_trace(&run_episode(&spec, &env, 50, 1, 0).unwrap(), &env).unwrap();
        let agg = aggregate(std::slice::from_ref(&a), Some(0.1)).unwrap();
        assert_eq!(agg.mean_regret, a.regret.regret);
        assert_eq!(agg.std_regret, 0.0);
        let mut b = a.clone();
        let mut c = a.clone();
        b.regret.pull_counts = vec![40, 10];
        c.regret.pull_counts = vec![30, 20];
        let agg = aggregate(&[b, c], None).unwrap();
        assert_eq!(agg.mean_pulls[1], 15.0);
        assert!(aggregate(&[], None).is_err());
    }

    #[test]
    fn coverage_zero_noise() {
        let env = Environment::gaussian(&[0.3, 0.1], 0.0).unwrap();
        let c = coverage_estimate(EstimatorSpec::EmpiricalMean, canonical(0.25, 0.05), &env, 0, 100, 50, 1).unwrap();
        assert_eq!(c.frequency, 0.0);
    }
}
