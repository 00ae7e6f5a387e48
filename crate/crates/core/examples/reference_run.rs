//! The canonical policy on two Bernoulli arms, checked against the pull bound.
//!
//! `cargo run --release --example reference_run -- [replications]`

use optibandit::harness::{run, ExperimentConfig, RunOptions};

fn main() -> optibandit::Result<()> {
    let config = ExperimentConfig::from_toml(include_str!("configs/reference.toml"))?;
    let opts = RunOptions {
        replications: std::env::args().nth(1).and_then(|s| s.parse().ok()),
        ..RunOptions::in_memory()
    };
    let outcome = run(&config, &opts)?;
    print!("{}", outcome.summary);
    Ok(())
}
