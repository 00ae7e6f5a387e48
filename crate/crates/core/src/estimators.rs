//! Mean estimators `mu_hat_i(m)`.
//!
//! Per-arm estimators (empirical mean, median-of-means, truncated mean) see only
//! the rewards of their own arm. The ridge and GP estimators share one state
//! across arms and predict the mean at each arm's feature / point.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::env::{Environment, KernelSpec};
use crate::error::{Error, Result};

/// Full re-inversion cadence for the ridge inverse.
pub const RIDGE_REFACTOR_EVERY: u64 = 256;

fn finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::input(format!("{what} must be finite, got {x}")))
    }
}

/// Welford running mean and population variance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MeanVarState {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl MeanVarState {
    pub fn update(&mut self, x: f64) -> Result<()> {
        finite(x, "observation")?;
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
        if self.m2 < 0.0 {
            self.m2 = 0.0;
        }
        Ok(())
    }

    /// `m2 / count`; zero until two observations are in.
    pub fn variance(&self) -> f64 {
        if self.count <= 1 {
            0.0
        } else {
            self.m2 / self.count as f64
        }
    }
}

/// Raw samples of one arm in insertion order, with running prefix sums so that
/// block means cost O(1).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SampleBuffer {
    samples: Vec<f64>,
    prefix: Vec<f64>,
}

impl SampleBuffer {
    pub fn new() -> Self {
        Self {
            samples: Vec::new(),
            prefix: vec![0.0],
        }
    }

    pub fn push(&mut self, x: f64) -> Result<()> {
        finite(x, "observation")?;
        if self.prefix.is_empty() {
            self.prefix.push(0.0);
        }
        let last = self.prefix[self.prefix.len() - 1];
        self.samples.push(x);
        self.prefix.push(last + x);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Median-of-means over the first `len` samples.
    pub fn median_of_means_prefix(&self, len: usize, num_blocks: usize) -> Result<f64> {
        check_blocks(len, num_blocks)?;
        let means = block_bounds(len, num_blocks)
            .map(|(lo, hi)| (self.prefix[hi] - self.prefix[lo]) / (hi - lo) as f64)
            .collect();
        Ok(median(means))
    }

    pub fn median_of_means(&self, num_blocks: usize) -> Result<f64> {
        self.median_of_means_prefix(self.len(), num_blocks)
    }
}

fn check_blocks(len: usize, num_blocks: usize) -> Result<()> {
    if len == 0 {
        return Err(Error::input("median-of-means over an empty buffer"));
    }
    if num_blocks == 0 || num_blocks > len {
        return Err(Error::input(format!(
            "median-of-means needs 1 <= blocks <= {len}, got {num_blocks}"
        )));
    }
    Ok(())
}

/// Contiguous near-equal blocks; the first `len % k` are one longer.
fn block_bounds(len: usize, k: usize) -> impl Iterator<Item = (usize, usize)> {
    let q = len / k;
    let r = len % k;
    (0..k).map(move |b| {
        let lo = b * q + b.min(r);
        let hi = lo + q + usize::from(b < r);
        (lo, hi)
    })
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Median of the means of `num_blocks` contiguous blocks of `samples`.
pub fn median_of_means(samples: &[f64], num_blocks: usize) -> Result<f64> {
    check_blocks(samples.len(), num_blocks)?;
    let means = block_bounds(samples.len(), num_blocks)
        .map(|(lo, hi)| samples[lo..hi].iter().sum::<f64>() / (hi - lo) as f64)
        .collect();
    Ok(median(means))
}

/// Mean of the samples clipped to `[-threshold, threshold]`.
pub fn truncated_mean(samples: &[f64], threshold: f64) -> Result<f64> {
    if !(threshold > 0.0) {
        return Err(Error::input(format!("truncation threshold must be > 0, got {threshold}")));
    }
    if samples.is_empty() {
        return Err(Error::input("truncated mean over an empty buffer"));
    }
    let s: f64 = samples.iter().map(|x| x.clamp(-threshold, threshold)).sum();
    Ok(s / samples.len() as f64)
}

/// Truncation level `sqrt(scale * m / log(1/delta))` after `m` samples.
pub fn truncation_threshold(scale: f64, delta: f64, m: usize) -> f64 {
    (scale * m as f64 / (1.0 / delta).ln()).sqrt()
}

/// Ridge regression with the inverse Gram matrix maintained by rank-one updates.
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeState {
    lambda: f64,
    v_matrix: DMatrix<f64>,
    v_inverse: DMatrix<f64>,
    xty: DVector<f64>,
    theta_hat: DVector<f64>,
    updates: u64,
}

impl RidgeState {
    pub fn new(dim: usize, lambda: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("ridge dimension must be >= 1"));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::input(format!("ridge lambda must be > 0, got {lambda}")));
        }
        Ok(Self {
            lambda,
            v_matrix: DMatrix::identity(dim, dim) * lambda,
            v_inverse: DMatrix::identity(dim, dim) / lambda,
            xty: DVector::zeros(dim),
            theta_hat: DVector::zeros(dim),
            updates: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.xty.len()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn v_matrix(&self) -> &DMatrix<f64> {
        &self.v_matrix
    }

    pub fn v_inverse(&self) -> &DMatrix<f64> {
        &self.v_inverse
    }

    pub fn xty(&self) -> &DVector<f64> {
        &self.xty
    }

    pub fn theta_hat(&self) -> &DVector<f64> {
        &self.theta_hat
    }

    fn vector(&self, x: &[f64]) -> Result<DVector<f64>> {
        if x.len() != self.dim() {
            return Err(Error::input(format!(
                "feature dimension {} does not match ridge dimension {}",
                x.len(),
                self.dim()
            )));
        }
        Ok(DVector::from_column_slice(x))
    }

    pub fn update(&mut self, x: &[f64], y: f64) -> Result<()> {
        let xv = self.vector(x)?;
        if !xv.iter().all(|v| v.is_finite()) {
            return Err(Error::input("ridge feature must be finite"));
        }
        finite(y, "ridge response")?;

        self.v_matrix += &xv * xv.transpose();
        self.xty += &xv * y;
        self.updates += 1;

        if self.updates.is_multiple_of(RIDGE_REFACTOR_EVERY) {
            self.v_inverse = self
                .v_matrix
                .clone()
                .cholesky()
                .ok_or_else(|| Error::Internal("ridge Gram matrix lost definiteness".into()))?
                .inverse();
        } else {
            // Sherman-Morrison
            let vx = &self.v_inverse * &xv;
            let denom = 1.0 + xv.dot(&vx);
            self.v_inverse -= (&vx * vx.transpose()) / denom;
        }
        self.theta_hat = &self.v_inverse * &self.xty;
        Ok(())
    }

    /// `(x . theta_hat, sqrt(x' V^-1 x))`.
    pub fn predict(&self, x: &[f64]) -> Result<(f64, f64)> {
        let xv = self.vector(x)?;
        let mean = xv.dot(&self.theta_hat);
        let q = xv.dot(&(&self.v_inverse * &xv));
        Ok((mean, q.max(0.0).sqrt()))
    }
}

/// Finite-arm GP posterior.
///
/// Repeated noisy observations at one arm are equivalent to a single
/// observation of their average with noise variance `noise_variance / n`, so
/// the posterior is solved on the at most `K` distinct observed arms.
#[derive(Debug, Clone, PartialEq)]
pub struct GpPosteriorState {
    kernel: KernelSpec,
    gram: DMatrix<f64>,
    noise_variance: f64,
    observed: Vec<(usize, f64)>,
    counts: Vec<u64>,
    sums: Vec<f64>,
    post_mean: Vec<f64>,
    post_std: Vec<f64>,
}

impl GpPosteriorState {
    pub fn new(kernel: KernelSpec, arm_points: &[Vec<f64>], noise_variance: f64) -> Result<Self> {
        kernel.validate()?;
        if !(noise_variance > 0.0 && noise_variance.is_finite()) {
            return Err(Error::input(format!("GP noise variance must be > 0, got {noise_variance}")));
        }
        let k = arm_points.len();
        let gram = kernel.matrix(arm_points);
        let post_std = (0..k).map(|i| gram[(i, i)].sqrt()).collect();
        Ok(Self {
            kernel,
            gram,
            noise_variance,
            observed: Vec::new(),
            counts: vec![0; k],
            sums: vec![0.0; k],
            post_mean: vec![0.0; k],
            post_std,
        })
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    pub fn observed(&self) -> &[(usize, f64)] {
        &self.observed
    }

    pub fn num_arms(&self) -> usize {
        self.counts.len()
    }

    pub fn posterior_mean(&self, arm: usize) -> f64 {
        self.post_mean[arm]
    }

    pub fn posterior_std(&self, arm: usize) -> f64 {
        self.post_std[arm]
    }

    pub fn update(&mut self, arm: usize, y: f64) -> Result<()> {
        if arm >= self.num_arms() {
            return Err(Error::input(format!("GP arm {arm} out of range")));
        }
        finite(y, "GP observation")?;
        self.observed.push((arm, y));
        self.counts[arm] += 1;
        self.sums[arm] += y;
        self.recompute()
    }

    fn recompute(&mut self) -> Result<()> {
        let seen: Vec<usize> = (0..self.num_arms()).filter(|&a| self.counts[a] > 0).collect();
        let n = seen.len();
        let a = DMatrix::from_fn(n, n, |i, j| {
            let base = self.gram[(seen[i], seen[j])];
            if i == j {
                base + self.noise_variance / self.counts[seen[i]] as f64
            } else {
                base
            }
        });
        let ybar = DVector::from_iterator(n, seen.iter().map(|&s| self.sums[s] / self.counts[s] as f64));
        let chol = a
            .cholesky()
            .ok_or_else(|| Error::Internal("GP system is not positive definite".into()))?;
        let alpha = chol.solve(&ybar);
        for x in 0..self.num_arms() {
            let kx = DVector::from_iterator(n, seen.iter().map(|&s| self.gram[(x, s)]));
            let v = chol.solve(&kx);
            self.post_mean[x] = kx.dot(&alpha);
            let var = self.gram[(x, x)] - kx.dot(&v);
            self.post_std[x] = var.max(0.0).sqrt();
        }
        Ok(())
    }
}

/// Which estimator produces `mu_hat_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EstimatorSpec {
    EmpiricalMean,
    /// Uses `min(blocks, m)` blocks after `m` samples.
    MedianOfMeans { blocks: usize },
    /// Clips at `sqrt(scale * m / log(1/delta))`.
    TruncatedMean { scale: f64, delta: f64 },
    Ridge { lambda: f64 },
    Gp { noise_variance: f64 },
}

impl EstimatorSpec {
    pub fn is_per_arm(&self) -> bool {
        !matches!(self, EstimatorSpec::Ridge { .. } | EstimatorSpec::Gp { .. })
    }

    /// Blocks recommended for median-of-means at confidence `delta`.
    pub fn mom_blocks_for(delta: f64) -> usize {
        (8.0 * (1.0 / delta).ln()).ceil().max(1.0) as usize
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            EstimatorSpec::EmpiricalMean => Ok(()),
            EstimatorSpec::MedianOfMeans { blocks: 0 } => {
                Err(Error::input("median-of-means needs at least one block"))
            }
            EstimatorSpec::MedianOfMeans { .. } => Ok(()),
            EstimatorSpec::TruncatedMean { scale, delta } => {
                if !(scale > 0.0 && scale.is_finite()) {
                    Err(Error::input("truncation scale must be > 0"))
                } else if !(delta > 0.0 && delta < 1.0) {
                    Err(Error::input("truncation delta must lie in (0, 1)"))
                } else {
                    Ok(())
                }
            }
            EstimatorSpec::Ridge { lambda } if !(lambda > 0.0) => Err(Error::input("ridge lambda must be > 0")),
            EstimatorSpec::Gp { noise_variance } if !(noise_variance > 0.0) => {
                Err(Error::input("GP noise variance must be > 0"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct ArmStats {
    moments: MeanVarState,
    buffer: Option<SampleBuffer>,
    value: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum Shared {
    PerArm(Vec<ArmStats>),
    Ridge { state: RidgeState, features: Vec<Vec<f64>> },
    Gp(GpPosteriorState),
}

/// Estimator states for every arm of one replication, behind one interface.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorBank {
    spec: EstimatorSpec,
    counts: Vec<u64>,
    shared: Shared,
}

impl EstimatorBank {
    pub fn new(spec: EstimatorSpec, env: &Environment) -> Result<Self> {
        spec.validate()?;
        let k = env.num_arms();
        let shared = match spec {
            EstimatorSpec::EmpiricalMean => Shared::PerArm(vec![
                ArmStats {
                    moments: MeanVarState::default(),
                    buffer: None,
                    value: f64::NAN,
                };
                k
            ]),
            EstimatorSpec::MedianOfMeans { .. } | EstimatorSpec::TruncatedMean { .. } => Shared::PerArm(vec![
                ArmStats {
                    moments: MeanVarState::default(),
                    buffer: Some(SampleBuffer::new()),
                    value: f64::NAN,
                };
                k
            ]),
            EstimatorSpec::Ridge { lambda } => {
                let lp = env
                    .linear_params()
                    .ok_or_else(|| Error::input("ridge estimator needs a linear-model environment"))?;
                Shared::Ridge {
                    state: RidgeState::new(lp.dim(), lambda)?,
                    features: lp.features.clone(),
                }
            }
            EstimatorSpec::Gp { noise_variance } => {
                let rk = env
                    .rkhs_params()
                    .ok_or_else(|| Error::input("GP estimator needs an RKHS environment"))?;
                Shared::Gp(GpPosteriorState::new(rk.kernel, &rk.arm_points, noise_variance)?)
            }
        };
        Ok(Self {
            spec,
            counts: vec![0; k],
            shared,
        })
    }

    pub fn spec(&self) -> &EstimatorSpec {
        &self.spec
    }

    pub fn num_arms(&self) -> usize {
        self.counts.len()
    }

    pub fn pulls(&self, arm: usize) -> u64 {
        self.counts[arm]
    }

    pub fn observe(&mut self, arm: usize, y: f64) -> Result<()> {
        if arm >= self.num_arms() {
            return Err(Error::input(format!("arm {arm} out of range")));
        }
        finite(y, "reward")?;
        match &mut self.shared {
            Shared::PerArm(stats) => {
                let s = &mut stats[arm];
                s.moments.update(y)?;
                if let Some(buf) = &mut s.buffer {
                    buf.push(y)?;
                }
                let m = s.moments.count as usize;
                s.value = match self.spec {
                    EstimatorSpec::MedianOfMeans { blocks } => {
                        let buf = s.buffer.as_ref().expect("median-of-means keeps samples");
                        buf.median_of_means(blocks.min(m))?
                    }
                    EstimatorSpec::TruncatedMean { scale, delta } => {
                        let buf = s.buffer.as_ref().expect("truncated mean keeps samples");
                        truncated_mean(buf.samples(), truncation_threshold(scale, delta, m))?
                    }
                    _ => s.moments.mean,
                };
            }
            Shared::Ridge { state, features } => state.update(&features[arm], y)?,
            Shared::Gp(gp) => gp.update(arm, y)?,
        }
        self.counts[arm] += 1;
        Ok(())
    }

    /// Current `mu_hat` for `arm`.
    pub fn value(&self, arm: usize) -> Result<f64> {
        if arm >= self.num_arms() {
            return Err(Error::input(format!("arm {arm} out of range")));
        }
        match &self.shared {
            Shared::PerArm(stats) => {
                if stats[arm].moments.count == 0 {
                    Err(Error::NotInitialized(arm))
                } else {
                    Ok(stats[arm].value)
                }
            }
            Shared::Ridge { state, features } => Ok(state.predict(&features[arm])?.0),
            Shared::Gp(gp) => Ok(gp.posterior_mean(arm)),
        }
    }

    /// Empirical population variance of `arm`'s rewards (per-arm kinds only).
    pub fn variance(&self, arm: usize) -> f64 {
        match &self.shared {
            Shared::PerArm(stats) => stats[arm].moments.variance(),
            _ => 0.0,
        }
    }

    /// Prediction width for the shared-state kinds: `sqrt(x' V^-1 x)` for
    /// ridge, the posterior standard deviation for GP.
    pub fn width(&self, arm: usize) -> Option<f64> {
        match &self.shared {
            Shared::PerArm(_) => None,
            Shared::Ridge { state, features } => state.predict(&features[arm]).ok().map(|p| p.1),
            Shared::Gp(gp) => Some(gp.posterior_std(arm)),
        }
    }

    pub fn ridge(&self) -> Option<&RidgeState> {
        match &self.shared {
            Shared::Ridge { state, .. } => Some(state),
            _ => None,
        }
    }

    pub fn gp(&self) -> Option<&GpPosteriorState> {
        match &self.shared {
            Shared::Gp(gp) => Some(gp),
            _ => None,
        }
    }
}
