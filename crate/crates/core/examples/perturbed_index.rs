//! Randomized indices bounded by an eighth of the smallest gap.

use optibandit::harness::{run, ExperimentConfig, RunOptions};

fn main() -> optibandit::Result<()> {
    let config = ExperimentConfig::from_toml(include_str!("configs/perturbed.toml"))?;
    let out = run(&config, &RunOptions::in_memory())?;
    print!("{}", out.summary);
    let visits: usize = out
        .reports
        .iter()
        .flat_map(|r| &r.deviation.arms)
        .map(|a| a.checks.len())
        .sum();
    println!("post-threshold visits checked: {visits}");
    Ok(())
}
