//! LinUCB on fixed feature vectors: predicted means against the truth.

use optibandit::harness::ExperimentConfig;
use optibandit::policy::run_episode;
use optibandit::verify::verify_trace;

fn main() -> optibandit::Result<()> {
    let config = ExperimentConfig::from_toml(include_str!("configs/linucb.toml"))?;
    let (env, spec) = config.resolve(config.horizon)?;
    let trace = run_episode(&spec, &env, config.horizon, config.seed, 0)?;
    let report = verify_trace(&trace, &env)?;
    let last = trace.len() - 1;
    println!("arm  true mean  predicted  radius  pulls");
    let pulls = trace.pull_counts();
    for (i, n) in pulls.iter().enumerate() {
        println!(
            "{i:>3}  {:>9.4}  {:>9.4}  {:>6.4}  {:>5}",
            env.true_mean(i)?,
            trace.estimates_at(last)[i],
            trace.radii_at(last)[i],
            n
        );
    }
    println!(
        "regret {:.2}; predictions inside the radius at every step: {}",
        report.regret.regret, report.good_event.holds
    );
    Ok(())
}
