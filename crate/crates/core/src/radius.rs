//! Confidence radii `r_i(m)` and the collapse threshold `m0`.
//!
//! All logarithms are natural. Comparisons against `gap / 4` are plain
//! floating-point `<=` with no slack.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_pulls(m: u64) -> Result<()> {
    if m < 1 {
        Err(Error::input("radius needs at least one pull"))
    } else {
        Ok(())
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::input(format!("delta must lie in (0, 1), got {delta}")))
    }
}

fn check_nonneg(x: f64, what: &str) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::input(format!("{what} must be finite and >= 0, got {x}")))
    }
}

/// `sqrt(2 sigma^2 log(1/delta) / m) + c1 log(1/delta) / m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalRadius {
    pub sigma_sq: f64,
    pub c1: f64,
    pub delta: f64,
}

impl CanonicalRadius {
    pub fn new(sigma_sq: f64, c1: f64, delta: f64) -> Result<Self> {
        let r = Self { sigma_sq, c1, delta };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        check_nonneg(self.sigma_sq, "sigma_sq")?;
        check_nonneg(self.c1, "c1")?;
        check_delta(self.delta)
    }

    pub fn log_inv_delta(&self) -> f64 {
        (1.0 / self.delta).ln()
    }

    pub fn radius(&self, m: u64) -> Result<f64> {
        check_pulls(m)?;
        let l = self.log_inv_delta();
        let m = m as f64;
        Ok((2.0 * self.sigma_sq * l / m).sqrt() + self.c1 * l / m)
    }

    /// `ceil(max(128 sigma^2 L / gap^2, 8 c1 L / gap))`, floored at 1.
    pub fn collapse_threshold(&self, gap: f64) -> Result<u64> {
        if !(gap > 0.0 && gap.is_finite()) {
            return Err(Error::input(format!("gap must be > 0, got {gap}")));
        }
        let l = self.log_inv_delta();
        let a = 128.0 * self.sigma_sq * l / (gap * gap);
        let b = 8.0 * self.c1 * l / gap;
        let m0 = (a.max(b).ceil() as u64).max(1);
        let r = self.radius(m0)?;
        if r > gap / 4.0 {
            return Err(Error::Internal(format!(
                "collapse threshold {m0} leaves radius {r} above gap/4 = {}",
                gap / 4.0
            )));
        }
        Ok(m0)
    }
}

/// Classical UCB radius `sqrt(2 log T / m)`.
pub fn ucb_radius(horizon: u64, m: u64) -> Result<f64> {
    if horizon < 2 {
        return Err(Error::input("UCB radius needs horizon >= 2"));
    }
    ucb_radius_from_log((horizon as f64).ln(), m)
}

/// [`ucb_radius`] with `log T` supplied directly.
pub fn ucb_radius_from_log(log_horizon: f64, m: u64) -> Result<f64> {
    check_pulls(m)?;
    Ok((2.0 * log_horizon / m as f64).sqrt())
}

/// Variance-adaptive radius `sqrt(2 s^2 L / m) + c L / m` for a log level `L`.
pub fn empirical_bernstein_radius(var_est: f64, log_level: f64, c: f64, m: u64) -> Result<f64> {
    check_pulls(m)?;
    if !(var_est >= 0.0) {
        return Err(Error::input(format!("variance estimate must be >= 0, got {var_est}")));
    }
    let m = m as f64;
    Ok((2.0 * var_est * log_level / m).sqrt() + c * log_level / m)
}

/// UCB-V radius `sqrt(2 s^2 log T / m) + 3 log T / m`.
pub fn ucbv_radius(var_est: f64, horizon: u64, m: u64) -> Result<f64> {
    empirical_bernstein_radius(var_est, (horizon as f64).ln(), 3.0, m)
}

pub fn linucb_radius(alpha: f64, width: f64) -> Result<f64> {
    if !(width >= 0.0) {
        return Err(Error::input(format!("width must be >= 0, got {width}")));
    }
    Ok(alpha * width)
}

/// `sqrt(lambda) B + R sqrt(2 log(1/delta) + d log(1 + T / (lambda d)))`.
pub fn linucb_alpha(lambda: f64, theta_bound: f64, noise_scale: f64, delta: f64, dim: usize, horizon: u64) -> f64 {
    let d = dim as f64;
    lambda.sqrt() * theta_bound
        + noise_scale * (2.0 * (1.0 / delta).ln() + d * (1.0 + horizon as f64 / (lambda * d)).ln()).sqrt()
}

pub fn gpucb_radius(beta: f64, posterior_std: f64) -> Result<f64> {
    if !(beta >= 0.0 && posterior_std >= 0.0) {
        return Err(Error::input("GP-UCB inputs must be >= 0"));
    }
    Ok(beta.sqrt() * posterior_std)
}

/// Finite-arm schedule `2 log(K t^2 pi^2 / (6 delta))`.
pub fn gpucb_beta(num_arms: usize, t: u64, delta: f64) -> f64 {
    let t = t as f64;
    2.0 * (num_arms as f64 * t * t * std::f64::consts::PI.powi(2) / (6.0 * delta)).ln()
}

/// `C sqrt(log(1/delta) / m) + D log(1/delta) / m`.
pub fn heavy_tail_radius(c: f64, d: f64, delta: f64, m: u64) -> Result<f64> {
    check_pulls(m)?;
    check_delta(delta)?;
    let l = (1.0 / delta).ln();
    let m = m as f64;
    Ok(c * (l / m).sqrt() + d * l / m)
}

/// Per-arm radius specification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadiusSpec {
    Canonical(CanonicalRadius),
    UcbHoeffding {
        horizon: u64,
    },
    /// Empirical-variance radius. `log_level` is `log T` for UCB-V or
    /// `log(1/delta)` for the heteroskedastic form; `variance_bound` caps the
    /// true variance and is only used to derive `m0`.
    UcbV {
        log_level: f64,
        c: f64,
        variance_bound: f64,
    },
    LinUcb {
        alpha: f64,
    },
    GpUcb {
        beta: f64,
    },
    HeavyTail {
        c: f64,
        d: f64,
        delta: f64,
    },
}

/// Data a radius may depend on besides the pull count.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RadiusInputs {
    pub var_est: f64,
    pub width: Option<f64>,
}

impl RadiusSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            RadiusSpec::Canonical(c) => c.validate(),
            RadiusSpec::UcbHoeffding { horizon } if horizon < 2 => Err(Error::input("UCB horizon must be >= 2")),
            RadiusSpec::UcbHoeffding { .. } => Ok(()),
            RadiusSpec::UcbV {
                log_level,
                c,
                variance_bound,
            } => {
                check_nonneg(log_level, "log level")?;
                check_nonneg(c, "c")?;
                check_nonneg(variance_bound, "variance bound")
            }
            RadiusSpec::LinUcb { alpha } => check_nonneg(alpha, "alpha"),
            RadiusSpec::GpUcb { beta } => check_nonneg(beta, "beta"),
            RadiusSpec::HeavyTail { c, d, delta } => {
                check_nonneg(c, "C")?;
                check_nonneg(d, "D")?;
                check_delta(delta)
            }
        }
    }

    /// True when the radius at time `t` depends on the shared design rather
    /// than on the arm's own pull count.
    pub fn is_structured(&self) -> bool {
        matches!(self, RadiusSpec::LinUcb { .. } | RadiusSpec::GpUcb { .. })
    }

    /// Radius after `m` pulls. Structured kinds ignore `m` and use `width`.
    pub fn radius(&self, m: u64, inputs: RadiusInputs) -> Result<f64> {
        match *self {
            RadiusSpec::Canonical(c) => c.radius(m),
            RadiusSpec::UcbHoeffding { horizon } => ucb_radius(horizon, m),
            RadiusSpec::UcbV { log_level, c, .. } => empirical_bernstein_radius(inputs.var_est, log_level, c, m),
            RadiusSpec::LinUcb { alpha } => linucb_radius(alpha, inputs.width.unwrap_or(f64::NAN)),
            RadiusSpec::GpUcb { beta } => gpucb_radius(beta, inputs.width.unwrap_or(f64::NAN)),
            RadiusSpec::HeavyTail { c, d, delta } => heavy_tail_radius(c, d, delta, m),
        }
    }

    /// A canonical radius that equals or dominates this one for every `m`,
    /// when one exists. Thresholds `m0` are derived from it.
    pub fn canonical_bound(&self) -> Option<CanonicalRadius> {
        match *self {
            RadiusSpec::Canonical(c) => Some(c),
            // sqrt(2 log T / m) is sigma^2 = 1, delta = 1/T exactly
            RadiusSpec::UcbHoeffding { horizon } => Some(CanonicalRadius {
                sigma_sq: 1.0,
                c1: 0.0,
                delta: 1.0 / horizon as f64,
            }),
            // dominates whenever the empirical variance stays below the bound
            RadiusSpec::UcbV {
                log_level,
                c,
                variance_bound,
            } => Some(CanonicalRadius {
                sigma_sq: variance_bound,
                c1: c,
                delta: (-log_level).exp(),
            }),
            RadiusSpec::HeavyTail { c, d, delta } => Some(CanonicalRadius {
                sigma_sq: c * c / 2.0,
                c1: d,
                delta,
            }),
            RadiusSpec::LinUcb { .. } | RadiusSpec::GpUcb { .. } => None,
        }
    }
}

/// `m0` for one suboptimal arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollapseThreshold {
    pub arm: usize,
    pub m0: u64,
    pub gap: f64,
}

impl CollapseThreshold {
    pub fn compute(arm: usize, spec: &CanonicalRadius, gap: f64) -> Result<Self> {
        Ok(Self {
            arm,
            m0: spec.collapse_threshold(gap)?,
            gap,
        })
    }
}
