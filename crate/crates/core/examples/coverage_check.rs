//! How often an estimate leaves its radius at some pull count, as the
//! variance proxy grows.

use optibandit::harness::{coverage, ExperimentConfig, RunOptions};
use optibandit::harness::config::PerArm;
use optibandit::harness::config::RadiusConfig;

fn main() -> optibandit::Result<()> {
    let base = ExperimentConfig::from_toml(include_str!("configs/coverage.toml"))?;
    for s2 in [0.25, 0.5, 1.0] {
        let mut cfg = base.clone();
        if let RadiusConfig::Canonical { sigma_sq, .. } = &mut cfg.policy.radius {
            *sigma_sq = Some(PerArm::Scalar(s2));
        }
        let res = coverage(&cfg, &RunOptions::in_memory())?;
        println!("sigma^2 = {s2}: {} of {} paths deviate ({:.4})", res.violations, res.reps, res.frequency);
    }
    Ok(())
}
