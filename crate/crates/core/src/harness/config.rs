//! Experiment configuration files.
//!
//! TOML is the primary format; files ending in `.json` are read as JSON. Every
//! table rejects unknown keys. A config names an environment and a policy in
//! terms the user knows (`delta = "1/(KT)"`, variance proxies defaulting to the
//! environment's); [`ExperimentConfig::resolve`] turns it into concrete
//! [`Environment`] and [`PolicySpec`] values for a given horizon.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::env::{Environment, KernelSpec};
use crate::error::{Error, Result};
use crate::estimators::EstimatorSpec;
use crate::policy::{PerturbDistribution, PerturbSpec, PolicySpec};
use crate::radius::{gpucb_beta, linucb_alpha, CanonicalRadius, RadiusSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub horizon: u64,
    pub replications: u64,
    pub seed: u64,
    pub env: EnvConfig,
    pub policy: PolicyConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default)]
    pub checks: ChecksConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coverage: Option<CoverageConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnvConfig {
    Bernoulli {
        means: Vec<f64>,
    },
    BoundedUniform {
        means: Vec<f64>,
        half_widths: Vec<f64>,
    },
    Gaussian {
        means: Vec<f64>,
        scale: f64,
    },
    HeteroskedasticGaussian {
        means: Vec<f64>,
        scales: Vec<f64>,
    },
    HeavyTailStudentT {
        means: Vec<f64>,
        scale: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tail_param: Option<f64>,
    },
    HeavyTailPareto {
        means: Vec<f64>,
        scale: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tail_param: Option<f64>,
    },
    LinearModel {
        theta_star: Vec<f64>,
        features: Vec<Vec<f64>>,
        noise_scale: f64,
    },
    RkhsFinite {
        arm_points: Vec<Vec<f64>>,
        kernel: KernelSpec,
        f_values: Vec<f64>,
        noise_scale: f64,
    },
}

/// Either one value for every arm or one value per arm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerArm {
    Scalar(f64),
    List(Vec<f64>),
}

impl PerArm {
    fn expand(&self, k: usize, field: &str) -> Result<Vec<f64>> {
        match self {
            PerArm::Scalar(x) => Ok(vec![*x; k]),
            PerArm::List(v) if v.len() == k => Ok(v.clone()),
            PerArm::List(v) => Err(Error::config(field, format!("expected {k} values, got {}", v.len()))),
        }
    }
}

/// A confidence level: a number in (0, 1), `"1/(KT)"` or `"1/T"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DeltaConfig {
    Value(f64),
    Rule(String),
}

impl DeltaConfig {
    pub fn resolve(&self, k: usize, horizon: u64, field: &str) -> Result<f64> {
        let d = match self {
            DeltaConfig::Value(v) => *v,
            DeltaConfig::Rule(r) => match r.replace(' ', "").as_str() {
                "1/(KT)" | "1/KT" => 1.0 / (k as f64 * horizon as f64),
                "1/T" => 1.0 / horizon as f64,
                other => return Err(Error::config(field, format!("unknown delta rule `{other}`"))),
            },
        };
        if d > 0.0 && d < 1.0 {
            Ok(d)
        } else {
            Err(Error::config(field, format!("delta must lie in (0, 1), got {d}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyConfig {
    pub estimator: EstimatorConfig,
    pub radius: RadiusConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<PerturbConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EstimatorConfig {
    EmpiricalMean,
    MedianOfMeans {
        /// Defaults to `ceil(8 log(1/delta))` with the radius's delta.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        blocks: Option<usize>,
    },
    TruncatedMean {
        scale: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        delta: Option<DeltaConfig>,
    },
    Ridge {
        lambda: f64,
    },
    Gp {
        noise_variance: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RadiusConfig {
    Canonical {
        /// Defaults to the environment's variance proxy per arm.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sigma_sq: Option<PerArm>,
        #[serde(default)]
        c1: f64,
        delta: DeltaConfig,
    },
    UcbHoeffding {},
    /// UCB-V with `log T`, or the heteroskedastic form with `log(1/delta)`
    /// when `delta` is given.
    UcbV {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        delta: Option<DeltaConfig>,
        #[serde(default = "default_ucbv_c")]
        c: f64,
        #[serde(default = "default_variance_bound")]
        variance_bound: PerArm,
    },
    LinUcb {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
        theta_bound: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        noise_scale: Option<f64>,
        delta: DeltaConfig,
    },
    GpUcb {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta: Option<f64>,
        delta: DeltaConfig,
    },
    HeavyTail {
        /// Defaults to `sqrt(32 Var)` per arm.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c: Option<PerArm>,
        #[serde(default = "default_heavy_d")]
        d: f64,
        delta: DeltaConfig,
    },
}

fn default_ucbv_c() -> f64 {
    3.0
}

fn default_variance_bound() -> PerArm {
    PerArm::Scalar(0.25)
}

fn default_heavy_d() -> f64 {
    1.0
}

/// Perturbation magnitude: a number or `"min_gap/8"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RhoConfig {
    Value(f64),
    Rule(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbConfig {
    pub rho: RhoConfig,
    #[serde(default = "default_distribution")]
    pub distribution: PerturbDistribution,
    #[serde(default)]
    pub scale: f64,
}

fn default_distribution() -> PerturbDistribution {
    PerturbDistribution::UniformSymmetric
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChecksConfig {
    /// Upper bound on the fraction of replications leaving the good event.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub good_event_max_frequency: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverageConfig {
    #[serde(default)]
    pub arm: usize,
    pub m_max: u64,
    pub reps: u64,
}

/// Read and validate a config file.
pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config(path.display().to_string(), format!("cannot read: {e}")))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let cfg = if is_json {
        ExperimentConfig::from_json(&text)?
    } else {
        ExperimentConfig::from_toml(&text)?
    };
    Ok(cfg)
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| {
            let field = e.span().map_or_else(|| "<document>".to_string(), |s| span_key(text, s));
            Error::config(field, e.message().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| Error::config(format!("line {}", e.line()), e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::config("<document>", e.to_string()))
    }

    pub fn num_arms(&self) -> usize {
        match &self.env {
            EnvConfig::Bernoulli { means }
            | EnvConfig::BoundedUniform { means, .. }
            | EnvConfig::Gaussian { means, .. }
            | EnvConfig::HeteroskedasticGaussian { means, .. }
            | EnvConfig::HeavyTailStudentT { means, .. }
            | EnvConfig::HeavyTailPareto { means, .. } => means.len(),
            EnvConfig::LinearModel { features, .. } => features.len(),
            EnvConfig::RkhsFinite { f_values, .. } => f_values.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::config(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        let k = self.num_arms();
        if self.horizon < k as u64 {
            return Err(Error::config(
                "horizon",
                format!("horizon {} is smaller than the number of arms {k}", self.horizon),
            ));
        }
        if self.replications < 1 {
            return Err(Error::config("replications", "need at least one replication"));
        }
        if self.replications > crate::rng::MAX_REPLICATION {
            return Err(Error::config("replications", "too many replications"));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::config("sweep", "horizons must be strictly increasing"));
            }
            if sweep.iter().any(|&h| h < k as u64) {
                return Err(Error::config("sweep", "every horizon must be at least the number of arms"));
            }
        }
        if self.workers == Some(0) {
            return Err(Error::config("workers", "need at least one worker"));
        }
        if let Some(f) = self.checks.good_event_max_frequency {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::config("checks.good_event_max_frequency", "must lie in [0, 1]"));
            }
        }
        // resolving at the main horizon surfaces every remaining field error
        self.resolve(self.horizon)?;
        if let Some(sweep) = &self.sweep {
            for &h in sweep {
                self.resolve(h)?;
            }
        }
        if let Some(c) = &self.coverage {
            if c.arm >= k {
                return Err(Error::config("coverage.arm", format!("arm {} out of range", c.arm)));
            }
            if c.reps == 0 {
                return Err(Error::config("coverage.reps", "need at least one replication"));
            }
        }
        Ok(())
    }

    pub fn build_env(&self) -> Result<Environment> {
        let env = match &self.env {
            EnvConfig::Bernoulli { means } => Environment::bernoulli(means),
            EnvConfig::BoundedUniform { means, half_widths } => Environment::bounded_uniform(means, half_widths),
            EnvConfig::Gaussian { means, scale } => Environment::gaussian(means, *scale),
            EnvConfig::HeteroskedasticGaussian { means, scales } => Environment::heteroskedastic(means, scales),
            EnvConfig::HeavyTailStudentT {
                means,
                scale,
                tail_param,
            } => Environment::student_t(means, *scale, tail_param.unwrap_or(crate::env::DEFAULT_TAIL_PARAM)),
            EnvConfig::HeavyTailPareto {
                means,
                scale,
                tail_param,
            } => Environment::pareto(means, *scale, tail_param.unwrap_or(crate::env::DEFAULT_TAIL_PARAM)),
            EnvConfig::LinearModel {
                theta_star,
                features,
                noise_scale,
            } => Environment::linear(theta_star.clone(), features.clone(), *noise_scale),
            EnvConfig::RkhsFinite {
                arm_points,
                kernel,
                f_values,
                noise_scale,
            } => Environment::rkhs(arm_points.clone(), *kernel, f_values.clone(), *noise_scale),
        };
        env.map_err(|e| Error::config("env", e.to_string()))
    }

    /// Concrete environment and policy for `horizon`.
    pub fn resolve(&self, horizon: u64) -> Result<(Environment, PolicySpec)> {
        let env = self.build_env()?;
        let k = env.num_arms();
        let radii = self.resolve_radii(&env, horizon)?;
        let radius_delta = self.radius_delta(k, horizon)?;
        let estimator = match &self.policy.estimator {
            EstimatorConfig::EmpiricalMean => EstimatorSpec::EmpiricalMean,
            EstimatorConfig::MedianOfMeans { blocks } => {
                let blocks = match (blocks, radius_delta) {
                    (Some(b), _) => *b,
                    (None, Some(d)) => EstimatorSpec::mom_blocks_for(d),
                    (None, None) => {
                        return Err(Error::config(
                            "policy.estimator.blocks",
                            "required when the radius has no delta",
                        ))
                    }
                };
                EstimatorSpec::MedianOfMeans { blocks }
            }
            EstimatorConfig::TruncatedMean { scale, delta } => {
                let delta = match (delta, radius_delta) {
                    (Some(d), _) => d.resolve(k, horizon, "policy.estimator.delta")?,
                    (None, Some(d)) => d,
                    (None, None) => {
                        return Err(Error::config(
                            "policy.estimator.delta",
                            "required when the radius has no delta",
                        ))
                    }
                };
                EstimatorSpec::TruncatedMean { scale: *scale, delta }
            }
            EstimatorConfig::Ridge { lambda } => EstimatorSpec::Ridge { lambda: *lambda },
            EstimatorConfig::Gp { noise_variance } => EstimatorSpec::Gp {
                noise_variance: *noise_variance,
            },
        };
        estimator
            .validate()
            .map_err(|e| Error::config("policy.estimator", e.to_string()))?;
        let mut spec = PolicySpec::new(estimator, radii);
        if let Some(p) = &self.policy.perturbation {
            let rho = match &p.rho {
                RhoConfig::Value(v) => *v,
                RhoConfig::Rule(r) if r.replace(' ', "") == "min_gap/8" => {
                    env.gap_profile().min_positive_gap().map_or(0.0, |g| g / 8.0)
                }
                RhoConfig::Rule(r) => {
                    return Err(Error::config("policy.perturbation.rho", format!("unknown rule `{r}`")))
                }
            };
            spec = spec.with_perturbation(PerturbSpec {
                rho,
                distribution: p.distribution,
                scale: p.scale,
            });
        }
        spec.validate(&env).map_err(|e| Error::config("policy", e.to_string()))?;
        Ok((env, spec))
    }

    fn radius_delta(&self, k: usize, horizon: u64) -> Result<Option<f64>> {
        let field = "policy.radius.delta";
        Ok(match &self.policy.radius {
            RadiusConfig::Canonical { delta, .. }
            | RadiusConfig::LinUcb { delta, .. }
            | RadiusConfig::GpUcb { delta, .. }
            | RadiusConfig::HeavyTail { delta, .. } => Some(delta.resolve(k, horizon, field)?),
            RadiusConfig::UcbV { delta: Some(d), .. } => Some(d.resolve(k, horizon, field)?),
            RadiusConfig::UcbV { delta: None, .. } | RadiusConfig::UcbHoeffding {} => None,
        })
    }

    fn resolve_radii(&self, env: &Environment, horizon: u64) -> Result<Vec<RadiusSpec>> {
        let k = env.num_arms();
        let field = "policy.radius.delta";
        let radii = match &self.policy.radius {
            RadiusConfig::Canonical { sigma_sq, c1, delta } => {
                let delta = delta.resolve(k, horizon, field)?;
                let s2 = match sigma_sq {
                    Some(s) => s.expand(k, "policy.radius.sigma_sq")?,
                    None => (0..k).map(|i| env.variance_proxy(i)).collect::<Result<_>>()?,
                };
                s2.into_iter()
                    .map(|s| {
                        CanonicalRadius::new(s, *c1, delta)
                            .map(RadiusSpec::Canonical)
                            .map_err(|e| Error::config("policy.radius", e.to_string()))
                    })
                    .collect::<Result<Vec<_>>>()?
            }
            RadiusConfig::UcbHoeffding {} => {
                if horizon < 2 {
                    return Err(Error::config("horizon", "UCB needs horizon >= 2"));
                }
                vec![RadiusSpec::UcbHoeffding { horizon }; k]
            }
            RadiusConfig::UcbV {
                delta,
                c,
                variance_bound,
            } => {
                let log_level = match delta {
                    Some(d) => (1.0 / d.resolve(k, horizon, field)?).ln(),
                    None => (horizon as f64).ln(),
                };
                variance_bound
                    .expand(k, "policy.radius.variance_bound")?
                    .into_iter()
                    .map(|v| RadiusSpec::UcbV {
                        log_level,
                        c: *c,
                        variance_bound: v,
                    })
                    .collect()
            }
            RadiusConfig::LinUcb {
                alpha,
                theta_bound,
                noise_scale,
                delta,
            } => {
                let delta = delta.resolve(k, horizon, field)?;
                let lp = env
                    .linear_params()
                    .ok_or_else(|| Error::config("policy.radius", "lin_ucb needs a linear_model environment"))?;
                let lambda = match self.policy.estimator {
                    EstimatorConfig::Ridge { lambda } => lambda,
                    _ => return Err(Error::config("policy.estimator", "lin_ucb needs the ridge estimator")),
                };
                let alpha = alpha.unwrap_or_else(|| {
                    linucb_alpha(
                        lambda,
                        *theta_bound,
                        noise_scale.unwrap_or(lp.noise_scale),
                        delta,
                        lp.dim(),
                        horizon,
                    )
                });
                vec![RadiusSpec::LinUcb { alpha }; k]
            }
            RadiusConfig::GpUcb { beta, delta } => {
                let delta = delta.resolve(k, horizon, field)?;
                let beta = beta.unwrap_or_else(|| gpucb_beta(k, horizon, delta));
                vec![RadiusSpec::GpUcb { beta }; k]
            }
            RadiusConfig::HeavyTail { c, d, delta } => {
                let delta = delta.resolve(k, horizon, field)?;
                let cs = match c {
                    Some(c) => c.expand(k, "policy.radius.c")?,
                    None => (0..k)
                        .map(|i| env.variance(i).map(|v| (32.0 * v).sqrt()))
                        .collect::<Result<_>>()?,
                };
                cs.into_iter()
                    .map(|c| RadiusSpec::HeavyTail { c, d: *d, delta })
                    .collect()
            }
        };
        for r in &radii {
            r.validate().map_err(|e| Error::config("policy.radius", e.to_string()))?;
        }
        Ok(radii)
    }

    /// Digest of every field that affects results; the output directory and
    /// worker count are excluded.
    pub fn semantic_hash(&self) -> String {
        let mut c = self.clone();
        c.output_dir = None;
        c.workers = None;
        let bytes = serde_json::to_vec(&c).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}

/// Best-effort dotted key for an error located at byte span `span`.
fn span_key(text: &str, span: std::ops::Range<usize>) -> String {
    let start = span.start.min(text.len());
    let line_start = text[..start].rfind('\n').map_or(0, |p| p + 1);
    let line = text[line_start..].lines().next().unwrap_or("");
    let key = line.split('=').next().unwrap_or("").trim();
    let table = text[..line_start]
        .lines()
        .rev()
        .find_map(|l| {
            let l = l.trim();
            l.strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .map(|t| t.trim_matches(['[', ']']).to_string())
        })
        .unwrap_or_default();
    match (table.is_empty(), key.is_empty() || key.starts_with('[')) {
        (true, _) => key.to_string(),
        (false, true) => table,
        (false, false) => format!("{table}.{key}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
schema_version = 1
horizon = 1000
replications = 10
seed = 1

[env]
kind = "bernoulli"
means = [0.9, 0.7]

[policy.estimator]
kind = "empirical_mean"

[policy.radius]
kind = "ucb_hoeffding"
"#;

    #[test]
    fn minimal_config_parses() {
        let cfg = ExperimentConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(cfg.horizon, 1000);
        let (env, spec) = cfg.resolve(cfg.horizon).unwrap();
        assert_eq!(env.num_arms(), 2);
        assert_eq!(spec.radii[0], RadiusSpec::UcbHoeffding { horizon: 1000 });
    }

    #[test]
    fn horizon_below_arms_names_field() {
        let text = MINIMAL.replace("horizon = 1000", "horizon = 1");
        match ExperimentConfig::from_toml(&text) {
            Err(Error::Config { field, .. }) => assert_eq!(field, "horizon"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_and_unknown_keys_rejected() {
        let dup = MINIMAL.replace("seed = 1", "seed = 1\nseed = 2");
        assert!(matches!(ExperimentConfig::from_toml(&dup), Err(Error::Config { .. })));
        let unknown = MINIMAL.replace("seed = 1", "seed = 1\nsede = 2");
        assert!(matches!(ExperimentConfig::from_toml(&unknown), Err(Error::Config { .. })));
        let unknown_inner = MINIMAL.replace("means = [0.9, 0.7]", "means = [0.9, 0.7]\nmeens = 1");
        assert!(ExperimentConfig::from_toml(&unknown_inner).is_err());
    }

    #[test]
    fn bad_delta_rejected() {
        let text = MINIMAL.replace(
            "kind = \"ucb_hoeffding\"",
            "kind = \"canonical\"\nsigma_sq = 0.25\ndelta = 1.5",
        );
        match ExperimentConfig::from_toml(&text) {
            Err(Error::Config { field, .. }) => assert_eq!(field, "policy.radius.delta"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn delta_rule_uses_horizon() {
        let text = MINIMAL.replace(
            "kind = \"ucb_hoeffding\"",
            "kind = \"canonical\"\nsigma_sq = 0.25\ndelta = \"1/(KT)\"",
        );
        let cfg = ExperimentConfig::from_toml(&text).unwrap();
        let (_, spec) = cfg.resolve(20_000).unwrap();
        match spec.radii[1] {
            RadiusSpec::Canonical(c) => assert_eq!(c.delta, 1.0 / 40_000.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sweep_must_increase() {
        let text = MINIMAL.replace("seed = 1", "seed = 1\nsweep = [100, 100]");
        match ExperimentConfig::from_toml(&text) {
            Err(Error::Config { field, .. }) => assert_eq!(field, "sweep"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn round_trips_through_toml_and_json() {
        let cfg = ExperimentConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap(), cfg);
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(ExperimentConfig::from_json(&json).unwrap(), cfg);
    }

    #[test]
    fn hash_ignores_output_dir_only() {
        let cfg = ExperimentConfig::from_toml(MINIMAL).unwrap();
        let mut moved = cfg.clone();
        moved.output_dir = Some("elsewhere".into());
        moved.workers = Some(3);
        assert_eq!(cfg.semantic_hash(), moved.semantic_hash());
        let mut reseeded = cfg.clone();
        reseeded.seed = 2;
        assert_ne!(cfg.semantic_hash(), reseeded.semantic_hash());
    }
}
