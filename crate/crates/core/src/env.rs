//! Ground-truth reward environments.
//!
//! An [`Environment`] is immutable once built and can be shared freely between
//! replications; each replication brings its own random streams.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, Pareto, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tail parameter used for heavy-tailed arms when none is given.
pub const DEFAULT_TAIL_PARAM: f64 = 2.5;

/// Smallest eigenvalue tolerated for the arm kernel matrix.
const PSD_FLOOR: f64 = -1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvKind {
    Bernoulli,
    BoundedUniform,
    Gaussian,
    HeteroskedasticGaussian,
    HeavyTailStudentT,
    HeavyTailPareto,
    LinearModel,
    RkhsFinite,
}

impl EnvKind {
    /// Kinds whose rewards are confined to `[0, 1]`.
    pub fn is_bounded(self) -> bool {
        matches!(self, EnvKind::Bernoulli | EnvKind::BoundedUniform)
    }
}

/// One arm's reward law: `mean + scale * noise`, with the noise family given by
/// the environment kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmModel {
    pub mean: f64,
    pub scale: f64,
    pub tail_param: Option<f64>,
}

impl ArmModel {
    pub fn new(mean: f64, scale: f64) -> Self {
        Self {
            mean,
            scale,
            tail_param: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelFamily {
    Rbf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    #[serde(default = "default_family")]
    pub family: KernelFamily,
    pub lengthscale: f64,
    pub signal_variance: f64,
}

fn default_family() -> KernelFamily {
    KernelFamily::Rbf
}

impl KernelSpec {
    pub fn rbf(lengthscale: f64, signal_variance: f64) -> Result<Self> {
        let k = Self {
            family: KernelFamily::Rbf,
            lengthscale,
            signal_variance,
        };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lengthscale > 0.0 && self.lengthscale.is_finite()) {
            return Err(Error::input("kernel lengthscale must be positive"));
        }
        if !(self.signal_variance > 0.0 && self.signal_variance.is_finite()) {
            return Err(Error::input("kernel signal variance must be positive"));
        }
        Ok(())
    }

    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        match self.family {
            KernelFamily::Rbf => {
                let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                self.signal_variance * (-sq / (2.0 * self.lengthscale * self.lengthscale)).exp()
            }
        }
    }

    /// Gram matrix over `points`.
    pub fn matrix(&self, points: &[Vec<f64>]) -> DMatrix<f64> {
        let n = points.len();
        DMatrix::from_fn(n, n, |i, j| self.eval(&points[i], &points[j]))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearParams {
    pub theta_star: Vec<f64>,
    pub features: Vec<Vec<f64>>,
    pub noise_scale: f64,
}

impl LinearParams {
    pub fn dim(&self) -> usize {
        self.theta_star.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RkhsParams {
    pub arm_points: Vec<Vec<f64>>,
    pub kernel: KernelSpec,
    pub f_values: Vec<f64>,
    pub noise_scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    kind: EnvKind,
    arms: Vec<ArmModel>,
    linear: Option<LinearParams>,
    rkhs: Option<RkhsParams>,
}

/// Best arm and per-arm suboptimality gaps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapProfile {
    pub mu_star: f64,
    /// Lowest index attaining `mu_star`.
    pub i_star: usize,
    pub gaps: Vec<f64>,
}

impl GapProfile {
    pub fn min_positive_gap(&self) -> Option<f64> {
        self.gaps
            .iter()
            .copied()
            .filter(|g| *g > 0.0)
            .min_by(f64::total_cmp)
    }
}

fn check_finite(values: &[f64], what: &str) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::input(format!("{what} must be finite")))
    }
}

impl Environment {
    fn from_arms(kind: EnvKind, arms: Vec<ArmModel>) -> Result<Self> {
        let env = Self {
            kind,
            arms,
            linear: None,
            rkhs: None,
        };
        env.validate()?;
        Ok(env)
    }

    pub fn bernoulli(means: &[f64]) -> Result<Self> {
        let arms = means.iter().map(|&m| ArmModel::new(m, 0.0)).collect();
        Self::from_arms(EnvKind::Bernoulli, arms)
    }

    /// Uniform on `[mean - half_width, mean + half_width]`, which must sit in `[0, 1]`.
    pub fn bounded_uniform(means: &[f64], half_widths: &[f64]) -> Result<Self> {
        if means.len() != half_widths.len() {
            return Err(Error::input("means and half widths differ in length"));
        }
        let arms = means
            .iter()
            .zip(half_widths)
            .map(|(&m, &h)| ArmModel::new(m, h))
            .collect();
        Self::from_arms(EnvKind::BoundedUniform, arms)
    }

    /// Gaussian arms sharing one noise scale.
    pub fn gaussian(means: &[f64], scale: f64) -> Result<Self> {
        let arms = means.iter().map(|&m| ArmModel::new(m, scale)).collect();
        Self::from_arms(EnvKind::Gaussian, arms)
    }

    /// Gaussian arms with arm-dependent noise scales.
    pub fn heteroskedastic(means: &[f64], scales: &[f64]) -> Result<Self> {
        if means.len() != scales.len() {
            return Err(Error::input("means and scales differ in length"));
        }
        let arms = means
            .iter()
            .zip(scales)
            .map(|(&m, &s)| ArmModel::new(m, s))
            .collect();
        Self::from_arms(EnvKind::HeteroskedasticGaussian, arms)
    }

    /// `mean + scale * t_nu` with `nu = dof`.
    pub fn student_t(means: &[f64], scale: f64, dof: f64) -> Result<Self> {
        let arms = means
            .iter()
            .map(|&m| ArmModel {
                mean: m,
                scale,
                tail_param: Some(dof),
            })
            .collect();
        Self::from_arms(EnvKind::HeavyTailStudentT, arms)
    }

    /// `mean + scale * (P - E[P])` with `P ~ Pareto(1, shape)`.
    pub fn pareto(means: &[f64], scale: f64, shape: f64) -> Result<Self> {
        let arms = means
            .iter()
            .map(|&m| ArmModel {
                mean: m,
                scale,
                tail_param: Some(shape),
            })
            .collect();
        Self::from_arms(EnvKind::HeavyTailPareto, arms)
    }

    /// Arm means are `features[i] . theta_star`; noise is Gaussian with `noise_scale`.
    pub fn linear(theta_star: Vec<f64>, features: Vec<Vec<f64>>, noise_scale: f64) -> Result<Self> {
        let d = theta_star.len();
        if d == 0 {
            return Err(Error::input("linear model needs a non-empty parameter"));
        }
        check_finite(&theta_star, "theta_star")?;
        for (i, x) in features.iter().enumerate() {
            if x.len() != d {
                return Err(Error::input(format!(
                    "feature of arm {i} has dimension {}, expected {d}",
                    x.len()
                )));
            }
            check_finite(x, "features")?;
        }
        let arms = features
            .iter()
            .map(|x| ArmModel::new(dot(x, &theta_star), noise_scale))
            .collect();
        let env = Self {
            kind: EnvKind::LinearModel,
            arms,
            linear: Some(LinearParams {
                theta_star,
                features,
                noise_scale,
            }),
            rkhs: None,
        };
        env.validate()?;
        Ok(env)
    }

    /// Finite-arm RKHS model storing `f(x_i)` directly.
    pub fn rkhs(
        arm_points: Vec<Vec<f64>>,
        kernel: KernelSpec,
        f_values: Vec<f64>,
        noise_scale: f64,
    ) -> Result<Self> {
        if arm_points.len() != f_values.len() {
            return Err(Error::input("arm points and f values differ in length"));
        }
        check_finite(&f_values, "f_values")?;
        let arms = f_values.iter().map(|&f| ArmModel::new(f, noise_scale)).collect();
        let env = Self {
            kind: EnvKind::RkhsFinite,
            arms,
            linear: None,
            rkhs: Some(RkhsParams {
                arm_points,
                kernel,
                f_values,
                noise_scale,
            }),
        };
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.arms.len();
        if k < 2 {
            return Err(Error::input(format!("need at least 2 arms, got {k}")));
        }
        if k >= crate::rng::MAX_ARMS {
            return Err(Error::input(format!("at most {} arms supported", crate::rng::MAX_ARMS - 1)));
        }
        for (i, arm) in self.arms.iter().enumerate() {
            if !arm.mean.is_finite() {
                return Err(Error::input(format!("mean of arm {i} is not finite")));
            }
            if !(arm.scale >= 0.0 && arm.scale.is_finite()) {
                return Err(Error::input(format!("scale of arm {i} must be finite and >= 0")));
            }
            if let Some(tp) = arm.tail_param {
                if !(tp > 2.0 && tp.is_finite()) {
                    return Err(Error::input(format!(
                        "tail parameter of arm {i} must exceed 2 (finite variance)"
                    )));
                }
            }
            match self.kind {
                EnvKind::Bernoulli => {
                    if !(0.0..=1.0).contains(&arm.mean) {
                        return Err(Error::input(format!("Bernoulli mean of arm {i} outside [0, 1]")));
                    }
                }
                EnvKind::BoundedUniform => {
                    if arm.mean - arm.scale < 0.0 || arm.mean + arm.scale > 1.0 {
                        return Err(Error::input(format!("uniform support of arm {i} leaves [0, 1]")));
                    }
                }
                EnvKind::HeavyTailStudentT | EnvKind::HeavyTailPareto if arm.tail_param.is_none() => {
                    return Err(Error::input(format!("heavy-tailed arm {i} needs a tail parameter")));
                }
                _ => {}
            }
        }
        if let Some(rk) = &self.rkhs {
            rk.kernel.validate()?;
            let dim = rk.arm_points.first().map_or(0, Vec::len);
            if rk.arm_points.iter().any(|p| p.len() != dim || !p.iter().all(|v| v.is_finite())) {
                return Err(Error::input("arm points must be finite and share one dimension"));
            }
            let gram = rk.kernel.matrix(&rk.arm_points);
            let min_eig = gram.symmetric_eigenvalues().min();
            if min_eig < PSD_FLOOR {
                return Err(Error::input(format!(
                    "kernel matrix is not positive semi-definite (min eigenvalue {min_eig:e})"
                )));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> EnvKind {
        self.kind
    }

    pub fn num_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn arms(&self) -> &[ArmModel] {
        &self.arms
    }

    pub fn linear_params(&self) -> Option<&LinearParams> {
        self.linear.as_ref()
    }

    pub fn rkhs_params(&self) -> Option<&RkhsParams> {
        self.rkhs.as_ref()
    }

    fn arm(&self, arm: usize) -> Result<&ArmModel> {
        self.arms.get(arm).ok_or_else(|| {
            Error::input(format!("arm index {arm} out of range for {} arms", self.arms.len()))
        })
    }

    pub fn true_mean(&self, arm: usize) -> Result<f64> {
        Ok(self.arm(arm)?.mean)
    }

    pub fn means(&self) -> Vec<f64> {
        self.arms.iter().map(|a| a.mean).collect()
    }

    /// Exact variance of one reward from `arm`.
    pub fn variance(&self, arm: usize) -> Result<f64> {
        let a = self.arm(arm)?;
        let s2 = a.scale * a.scale;
        Ok(match self.kind {
            EnvKind::Bernoulli => a.mean * (1.0 - a.mean),
            EnvKind::BoundedUniform => s2 / 3.0,
            EnvKind::Gaussian
            | EnvKind::HeteroskedasticGaussian
            | EnvKind::LinearModel
            | EnvKind::RkhsFinite => s2,
            EnvKind::HeavyTailStudentT => {
                let nu = a.tail_param.unwrap_or(DEFAULT_TAIL_PARAM);
                s2 * nu / (nu - 2.0)
            }
            EnvKind::HeavyTailPareto => {
                let al = a.tail_param.unwrap_or(DEFAULT_TAIL_PARAM);
                s2 * al / ((al - 1.0) * (al - 1.0) * (al - 2.0))
            }
        })
    }

    /// Default variance proxy for the canonical radius: 1/4 for rewards in
    /// `[0, 1]` (Hoeffding), the exact variance otherwise.
    pub fn variance_proxy(&self, arm: usize) -> Result<f64> {
        if self.kind.is_bounded() {
            self.arm(arm)?;
            Ok(0.25)
        } else {
            self.variance(arm)
        }
    }

    pub fn gap_profile(&self) -> GapProfile {
        let (i_star, mu_star) = self
            .arms
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, bm), (i, a)| {
                if a.mean > bm {
                    (i, a.mean)
                } else {
                    (bi, bm)
                }
            });
        let gaps = self.arms.iter().map(|a| mu_star - a.mean).collect();
        GapProfile {
            mu_star,
            i_star,
            gaps,
        }
    }

    /// One draw from `arm`'s reward law.
    pub fn sample_reward<R: Rng + ?Sized>(&self, arm: usize, rng: &mut R) -> Result<f64> {
        let a = self.arm(arm)?;
        let x = match self.kind {
            EnvKind::Bernoulli => {
                if rng.random::<f64>() < a.mean {
                    1.0
                } else {
                    0.0
                }
            }
            EnvKind::BoundedUniform => a.mean + a.scale * (2.0 * rng.random::<f64>() - 1.0),
            EnvKind::Gaussian
            | EnvKind::HeteroskedasticGaussian
            | EnvKind::LinearModel
            | EnvKind::RkhsFinite => {
                let z: f64 = StandardNormal.sample(rng);
                a.mean + a.scale * z
            }
            EnvKind::HeavyTailStudentT => {
                let nu = a.tail_param.unwrap_or(DEFAULT_TAIL_PARAM);
                let t = StudentT::new(nu)
                    .map_err(|e| Error::Internal(format!("student-t: {e}")))?
                    .sample(rng);
                a.mean + a.scale * t
            }
            EnvKind::HeavyTailPareto => {
                let al = a.tail_param.unwrap_or(DEFAULT_TAIL_PARAM);
                let p = Pareto::new(1.0, al)
                    .map_err(|e| Error::Internal(format!("pareto: {e}")))?
                    .sample(rng);
                a.mean + a.scale * (p - al / (al - 1.0))
            }
        };
        if self.kind.is_bounded() && !(0.0..=1.0).contains(&x) {
            return Err(Error::Internal(format!("bounded arm {arm} emitted {x}")));
        }
        Ok(x)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
