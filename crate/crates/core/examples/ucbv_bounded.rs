//! UCB-V against Hoeffding-style UCB when the rewards have small variance.

use optibandit::harness::{run, ExperimentConfig, RunOptions};

fn main() -> optibandit::Result<()> {
    let ucbv = ExperimentConfig::from_toml(include_str!("configs/ucbv.toml"))?;
    let mut hoeffding = ucbv.clone();
    hoeffding.policy.radius = optibandit::harness::config::RadiusConfig::UcbHoeffding {};
    for (name, cfg) in [("ucb-v", &ucbv), ("ucb", &hoeffding)] {
        let out = run(cfg, &RunOptions::in_memory())?;
        let a = &out.aggregate;
        println!(
            "{name:>6}: mean regret {:.2} (sd {:.2}), mean pulls {:?}",
            a.mean_regret, a.std_regret, a.mean_pulls
        );
    }
    Ok(())
}
