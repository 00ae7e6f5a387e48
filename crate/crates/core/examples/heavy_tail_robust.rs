//! Student-t rewards: median-of-means against the plain mean, both in a
//! bandit run and in the uniform-deviation frequency of their radii.

use optibandit::harness::{run, ExperimentConfig, RunOptions};
use optibandit::verify::coverage_estimate;
use optibandit::{CanonicalRadius, Environment, EstimatorSpec, RadiusSpec};

fn main() -> optibandit::Result<()> {
    let config = ExperimentConfig::from_toml(include_str!("configs/heavy_tail.toml"))?;
    let out = run(&config, &RunOptions::in_memory())?;
    print!("{}", out.summary);

    let env = Environment::student_t(&[0.0, 0.0], 1.0, 2.5)?;
    let var = env.variance(0)?;
    let reps = 2000;
    for delta in [0.05, 0.01] {
        let robust = coverage_estimate(
            EstimatorSpec::MedianOfMeans {
                blocks: EstimatorSpec::mom_blocks_for(delta),
            },
            RadiusSpec::HeavyTail {
                c: (32.0 * var).sqrt(),
                d: 1.0,
                delta,
            },
            &env,
            0,
            1000,
            reps,
            1,
        )?;
        let plain = coverage_estimate(
            EstimatorSpec::EmpiricalMean,
            RadiusSpec::Canonical(CanonicalRadius::new(var, 0.0, delta)?),
            &env,
            0,
            1000,
            reps,
            1,
        )?;
        println!(
            "delta {delta}: median-of-means {:.4}, plain mean {:.4}",
            robust.frequency, plain.frequency
        );
    }
    Ok(())
}
