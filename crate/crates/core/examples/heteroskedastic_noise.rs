//! Unequal noise levels: one worst-case variance proxy for every arm against a
//! radius that adapts to each arm's empirical variance.

use optibandit::harness::config::{DeltaConfig, PerArm, RadiusConfig};
use optibandit::harness::{run, ExperimentConfig, RunOptions};

fn main() -> optibandit::Result<()> {
    let adaptive = ExperimentConfig::from_toml(include_str!("configs/heteroskedastic.toml"))?;
    let mut worst_case = adaptive.clone();
    worst_case.policy.radius = RadiusConfig::Canonical {
        sigma_sq: Some(PerArm::Scalar(0.25)),
        c1: 0.0,
        delta: DeltaConfig::Rule("1/(KT)".into()),
    };
    for (name, cfg) in [("adaptive", &adaptive), ("worst-case", &worst_case)] {
        let out = run(cfg, &RunOptions::in_memory())?;
        println!("{name}:");
        print!("{}", out.summary);
    }
    Ok(())
}
