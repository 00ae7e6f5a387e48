//! GP-UCB on five points: posterior means and when each radius collapsed.

use optibandit::harness::ExperimentConfig;
use optibandit::policy::run_episode;
use optibandit::verify::verify_trace;

fn main() -> optibandit::Result<()> {
    let config = ExperimentConfig::from_toml(include_str!("configs/gpucb.toml"))?;
    let (env, spec) = config.resolve(config.horizon)?;
    let trace = run_episode(&spec, &env, config.horizon, config.seed, 0)?;
    let report = verify_trace(&trace, &env)?;
    let last = trace.len() - 1;
    let pulls = trace.pull_counts();
    for (i, n) in pulls.iter().enumerate() {
        println!(
            "arm {i}: f={:.3} posterior mean={:.3} radius={:.4} pulls={}",
            env.true_mean(i)?,
            trace.estimates_at(last)[i],
            trace.radii_at(last)[i],
            n
        );
    }
    for c in &report.collapse {
        println!(
            "arm {} (gap {:.3}): radius below gap/4 after {:?} visits, below gap/8 after {:?}",
            c.arm, c.gap, c.quarter_gap_pulls, c.eighth_gap_pulls
        );
    }
    Ok(())
}
