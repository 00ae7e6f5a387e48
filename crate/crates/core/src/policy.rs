//! The optimistic index policy.
//!
//! Arms `0..K` are pulled once each in order; afterwards the policy pulls the
//! lowest-index maximizer of `estimate + radius + xi`, where `xi` is zero unless
//! a [`PerturbSpec`] is attached.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::env::Environment;
use crate::error::{Error, Result};
use crate::estimators::{EstimatorBank, EstimatorSpec};
use crate::radius::{RadiusInputs, RadiusSpec};
use crate::rng::ReplicationStreams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbDistribution {
    /// Uniform on `[-rho, rho]`.
    UniformSymmetric,
    /// `N(0, scale^2)` clipped to `[-rho, rho]`.
    TruncatedGaussian,
}

/// Bounded random perturbations of the index. Every draw satisfies
/// `|xi| <= rho` by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbSpec {
    pub rho: f64,
    pub distribution: PerturbDistribution,
    #[serde(default)]
    pub scale: f64,
}

impl PerturbSpec {
    pub fn uniform(rho: f64) -> Self {
        Self {
            rho,
            distribution: PerturbDistribution::UniformSymmetric,
            scale: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho >= 0.0 && self.rho.is_finite()) {
            return Err(Error::input(format!("rho must be finite and >= 0, got {}", self.rho)));
        }
        if !(self.scale >= 0.0 && self.scale.is_finite()) {
            return Err(Error::input("perturbation scale must be finite and >= 0"));
        }
        Ok(())
    }
}

/// Fill `out` with one perturbation per arm.
pub fn draw_perturbations<R: Rng + ?Sized>(spec: &PerturbSpec, rng: &mut R, out: &mut [f64]) {
    if spec.rho == 0.0 {
        out.fill(0.0);
        return;
    }
    for xi in out.iter_mut() {
        *xi = match spec.distribution {
            PerturbDistribution::UniformSymmetric => spec.rho * (2.0 * rng.random::<f64>() - 1.0),
            PerturbDistribution::TruncatedGaussian => {
                let z: f64 = rng.sample(StandardNormal);
                (spec.scale * z).clamp(-spec.rho, spec.rho)
            }
        };
    }
}

/// Lowest index attaining the maximum.
pub fn select_arm(indices: &[f64]) -> Result<usize> {
    if indices.is_empty() {
        return Err(Error::input("cannot select among zero arms"));
    }
    let mut best = 0;
    for (i, &u) in indices.iter().enumerate() {
        if !u.is_finite() {
            return Err(Error::Internal(format!("index of arm {i} is not finite ({u})")));
        }
        if u > indices[best] {
            best = i;
        }
    }
    Ok(best)
}

/// Estimator, per-arm radii and optional perturbation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicySpec {
    pub estimator: EstimatorSpec,
    pub radii: Vec<RadiusSpec>,
    pub perturbation: Option<PerturbSpec>,
}

impl PolicySpec {
    pub fn new(estimator: EstimatorSpec, radii: Vec<RadiusSpec>) -> Self {
        Self {
            estimator,
            radii,
            perturbation: None,
        }
    }

    /// Same radius for every arm.
    pub fn uniform(estimator: EstimatorSpec, radius: RadiusSpec, num_arms: usize) -> Self {
        Self::new(estimator, vec![radius; num_arms])
    }

    pub fn with_perturbation(mut self, p: PerturbSpec) -> Self {
        self.perturbation = Some(p);
        self
    }

    pub fn validate(&self, env: &Environment) -> Result<()> {
        self.estimator.validate()?;
        if self.radii.len() != env.num_arms() {
            return Err(Error::input(format!(
                "{} radius specs for {} arms",
                self.radii.len(),
                env.num_arms()
            )));
        }
        for r in &self.radii {
            r.validate()?;
            let ok = match r {
                RadiusSpec::LinUcb { .. } => matches!(self.estimator, EstimatorSpec::Ridge { .. }),
                RadiusSpec::GpUcb { .. } => matches!(self.estimator, EstimatorSpec::Gp { .. }),
                _ => self.estimator.is_per_arm(),
            };
            if !ok {
                return Err(Error::input(format!(
                    "radius {r:?} cannot be paired with estimator {:?}",
                    self.estimator
                )));
            }
        }
        if let Some(p) = &self.perturbation {
            p.validate()?;
        }
        Ok(())
    }

    pub fn rho(&self) -> f64 {
        self.perturbation.map_or(0.0, |p| p.rho)
    }
}

/// Everything the policy saw and did at one time step.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StepRecord {
    pub time: u64,
    pub chosen_arm: usize,
    pub reward: f64,
    /// `N_A(t-1)` for the chosen arm.
    pub pull_count_before: u64,
    pub estimates: Vec<f64>,
    pub radii: Vec<f64>,
    pub indices: Vec<f64>,
    pub perturbations: Vec<f64>,
}

impl StepRecord {
    fn reset(&mut self, k: usize) {
        for v in [&mut self.estimates, &mut self.radii, &mut self.indices, &mut self.perturbations] {
            v.clear();
            v.resize(k, 0.0);
        }
    }
}

/// Decision-time estimate and radius of every arm; NaN where a per-arm
/// estimator has no data yet.
pub fn decision_values(
    bank: &EstimatorBank,
    radii: &[RadiusSpec],
    estimates: &mut [f64],
    out_radii: &mut [f64],
) -> Result<()> {
    for (arm, spec) in radii.iter().enumerate() {
        let m = bank.pulls(arm);
        if spec.is_structured() || m > 0 {
            estimates[arm] = bank.value(arm)?;
            let inputs = RadiusInputs {
                var_est: bank.variance(arm),
                width: bank.width(arm),
            };
            out_radii[arm] = spec.radius(m, inputs)?;
        } else {
            estimates[arm] = f64::NAN;
            out_radii[arm] = f64::NAN;
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct PolicyState {
    spec: PolicySpec,
    bank: EstimatorBank,
    pull_counts: Vec<u64>,
    time: u64,
}

impl PolicyState {
    pub fn new(spec: PolicySpec, env: &Environment) -> Result<Self> {
        spec.validate(env)?;
        let bank = EstimatorBank::new(spec.estimator, env)?;
        Ok(Self {
            spec,
            bank,
            pull_counts: vec![0; env.num_arms()],
            time: 0,
        })
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn pull_counts(&self) -> &[u64] {
        &self.pull_counts
    }

    pub fn estimators(&self) -> &EstimatorBank {
        &self.bank
    }

    pub fn spec(&self) -> &PolicySpec {
        &self.spec
    }

    pub fn step(&mut self, env: &Environment, streams: &mut ReplicationStreams) -> Result<StepRecord> {
        let mut rec = StepRecord::default();
        self.step_into(env, streams, &mut rec)?;
        Ok(rec)
    }

    /// One decision, reusing `rec`'s buffers.
    pub fn step_into(
        &mut self,
        env: &Environment,
        streams: &mut ReplicationStreams,
        rec: &mut StepRecord,
    ) -> Result<()> {
        let k = self.pull_counts.len();
        rec.reset(k);
        decision_values(&self.bank, &self.spec.radii, &mut rec.estimates, &mut rec.radii)?;

        let round_robin = (self.time as usize) < k;
        if !round_robin {
            if let Some(p) = &self.spec.perturbation {
                draw_perturbations(p, streams.perturbation(), &mut rec.perturbations);
            }
        }
        for i in 0..k {
            rec.indices[i] = rec.estimates[i] + rec.radii[i] + rec.perturbations[i];
        }
        let arm = if round_robin {
            self.time as usize
        } else {
            select_arm(&rec.indices)?
        };

        let reward = env.sample_reward(arm, streams.arm(arm))?;
        rec.time = self.time;
        rec.chosen_arm = arm;
        rec.reward = reward;
        rec.pull_count_before = self.pull_counts[arm];

        self.bank.observe(arm, reward)?;
        self.pull_counts[arm] += 1;
        self.time += 1;
        Ok(())
    }
}

/// Complete per-step record of one run, stored column-wise. Per-arm columns
/// are row-major: entry `(t, i)` sits at `t * num_arms + i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BanditTrace {
    pub replication: u64,
    pub seed: u64,
    pub num_arms: usize,
    /// Digest of the environment this trace was drawn from.
    pub env_id: String,
    pub spec: PolicySpec,
    pub arms: Vec<usize>,
    pub rewards: Vec<f64>,
    pub pull_count_before: Vec<u64>,
    pub estimates: Vec<f64>,
    pub radii: Vec<f64>,
    pub indices: Vec<f64>,
    pub perturbations: Vec<f64>,
}

impl BanditTrace {
    pub fn new(replication: u64, seed: u64, env: &Environment, spec: PolicySpec) -> Self {
        Self {
            replication,
            seed,
            num_arms: env.num_arms(),
            env_id: env_id(env),
            spec,
            arms: Vec::new(),
            rewards: Vec::new(),
            pull_count_before: Vec::new(),
            estimates: Vec::new(),
            radii: Vec::new(),
            indices: Vec::new(),
            perturbations: Vec::new(),
        }
    }

    /// Equality with floats compared bit for bit, so `NaN` placeholders match.
    pub fn bit_identical(&self, other: &Self) -> bool {
        let same = |a: &[f64], b: &[f64]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits());
        self.replication == other.replication
            && self.seed == other.seed
            && self.num_arms == other.num_arms
            && self.env_id == other.env_id
            && self.spec == other.spec
            && self.arms == other.arms
            && self.pull_count_before == other.pull_count_before
            && same(&self.rewards, &other.rewards)
            && same(&self.estimates, &other.estimates)
            && same(&self.radii, &other.radii)
            && same(&self.indices, &other.indices)
            && same(&self.perturbations, &other.perturbations)
    }

    pub fn len(&self) -> usize {
        self.arms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arms.is_empty()
    }

    pub fn push(&mut self, rec: &StepRecord) {
        self.arms.push(rec.chosen_arm);
        self.rewards.push(rec.reward);
        self.pull_count_before.push(rec.pull_count_before);
        self.estimates.extend_from_slice(&rec.estimates);
        self.radii.extend_from_slice(&rec.radii);
        self.indices.extend_from_slice(&rec.indices);
        self.perturbations.extend_from_slice(&rec.perturbations);
    }

    fn row<'a>(&self, col: &'a [f64], t: usize) -> &'a [f64] {
        &col[t * self.num_arms..(t + 1) * self.num_arms]
    }

    pub fn estimates_at(&self, t: usize) -> &[f64] {
        self.row(&self.estimates, t)
    }

    pub fn radii_at(&self, t: usize) -> &[f64] {
        self.row(&self.radii, t)
    }

    pub fn indices_at(&self, t: usize) -> &[f64] {
        self.row(&self.indices, t)
    }

    pub fn perturbations_at(&self, t: usize) -> &[f64] {
        self.row(&self.perturbations, t)
    }

    pub fn record(&self, t: usize) -> StepRecord {
        StepRecord {
            time: t as u64,
            chosen_arm: self.arms[t],
            reward: self.rewards[t],
            pull_count_before: self.pull_count_before[t],
            estimates: self.estimates_at(t).to_vec(),
            radii: self.radii_at(t).to_vec(),
            indices: self.indices_at(t).to_vec(),
            perturbations: self.perturbations_at(t).to_vec(),
        }
    }

    /// `N_i(T)` for every arm.
    pub fn pull_counts(&self) -> Vec<u64> {
        let mut n = vec![0; self.num_arms];
        for &a in &self.arms {
            n[a] += 1;
        }
        n
    }

    /// Rewards of `arm` in pull order.
    pub fn arm_rewards(&self, arm: usize) -> Vec<f64> {
        self.arms
            .iter()
            .zip(&self.rewards)
            .filter(|(&a, _)| a == arm)
            .map(|(_, &r)| r)
            .collect()
    }
}

/// Short hex digest of the environment's JSON form.
pub fn env_id(env: &Environment) -> String {
    let json = serde_json::to_vec(env).expect("environment serializes");
    hex::encode(&Sha256::digest(&json)[..8])
}

/// Run one replication of `horizon` steps.
pub fn run_episode(
    spec: &PolicySpec,
    env: &Environment,
    horizon: u64,
    seed: u64,
    replication: u64,
) -> Result<BanditTrace> {
    if horizon < env.num_arms() as u64 {
        return Err(Error::input(format!(
            "horizon {horizon} is shorter than the {} round-robin pulls",
            env.num_arms()
        )));
    }
    let mut state = PolicyState::new(spec.clone(), env)?;
    let mut streams = ReplicationStreams::new(seed, replication, env.num_arms());
    let mut trace = BanditTrace::new(replication, seed, env, spec.clone());
    let k = env.num_arms();
    trace.arms.reserve(horizon as usize);
    trace.estimates.reserve(horizon as usize * k);
    let mut rec = StepRecord::default();
    for _ in 0..horizon {
        state.step_into(env, &mut streams, &mut rec)?;
        trace.push(&rec);
    }
    Ok(trace)
}
