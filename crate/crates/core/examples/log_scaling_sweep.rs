//! Classical UCB regret divided by log T across three horizons.

use optibandit::harness::{sweep, ExperimentConfig, RunOptions};

fn main() -> optibandit::Result<()> {
    let config = ExperimentConfig::from_toml(include_str!("configs/ucb_sweep.toml"))?;
    let opts = RunOptions {
        replications: Some(std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20)),
        ..RunOptions::in_memory()
    };
    let table = sweep(&config, &opts)?;
    print!("{}", table.to_csv()?);
    println!("max/min regret/log T: {:.3}", table.log_ratio_spread);
    Ok(())
}
