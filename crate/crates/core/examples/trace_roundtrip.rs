//! Write a trace, read it back, verify it, then show that an edited cell is
//! caught by recomputation.

use optibandit::harness::{read_trace_csv, write_trace_csv, ExperimentConfig};
use optibandit::policy::run_episode;
use optibandit::verify::verify_trace;

fn main() -> optibandit::Result<()> {
    let config = ExperimentConfig::from_toml(include_str!("configs/reference.toml"))?;
    let (env, spec) = config.resolve(2000)?;
    let trace = run_episode(&spec, &env, 2000, config.seed, 0)?;
    let path = std::env::temp_dir().join("optibandit_example_trace.csv");
    write_trace_csv(&path, &trace, &env)?;

    let mut loaded = read_trace_csv(&path)?;
    let report = verify_trace(&loaded.trace, &loaded.env)?;
    println!("{}: deterministic checks pass = {}", path.display(), report.deterministic_pass());

    loaded.trace.estimates[1000 * 2 + 1] += 1e-6;
    let report = verify_trace(&loaded.trace, &loaded.env)?;
    let m = &report.consistency.mismatches[0];
    println!(
        "after editing one estimate: consistent = {}, first mismatch at t={} column {} ({} vs {})",
        report.consistency.consistent, m.time, m.column, m.recorded, m.recomputed
    );
    std::fs::remove_file(&path)?;
    Ok(())
}
