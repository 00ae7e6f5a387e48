use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use optibandit::harness::{self, parse_config, read_trace_csv, RunOptions};
use optibandit::policy::env_id;
use optibandit::verify::verify_trace;

#[derive(Parser)]
#[command(name = "optibandit", version, about = "Optimistic bandit runs and regret verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run all replications of a config and verify each trace.
    Run(RunArgs),
    /// Run a config at every horizon in its sweep list.
    Sweep(RunArgs),
    /// Re-check a trace file written by `run`.
    Verify {
        trace: PathBuf,
        /// Config whose environment and policy the trace must match.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Print the full JSON report.
        #[arg(long)]
        json: bool,
    },
    /// Estimate how often the confidence radius is violated for one arm.
    Coverage(RunArgs),
    /// Print the summary of a finished run.
    Show { manifest: PathBuf },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    reps: Option<u64>,
    #[arg(long)]
    no_traces: bool,
    #[arg(long)]
    workers: Option<usize>,
}

impl RunArgs {
    fn options(&self) -> RunOptions {
        RunOptions {
            out_dir: self.out.clone(),
            workers: self.workers,
            write_traces: !self.no_traces,
            seed: self.seed,
            replications: self.reps,
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> optibandit::Result<bool> {
    match cli.command {
        Command::Run(args) => {
            let cfg = parse_config(&args.config)?;
            let out = harness::run(&cfg, &args.options())?;
            print!("{}", out.summary);
            if let Some(dir) = &out.config.output_dir {
                println!("outputs in {}", dir.display());
            }
            Ok(out.deterministic_pass())
        }
        Command::Sweep(args) => {
            let cfg = parse_config(&args.config)?;
            let table = harness::sweep(&cfg, &args.options())?;
            print!("{}", table.to_csv()?);
            println!("max/min regret over log horizon: {}", harness::summary::sig6(table.log_ratio_spread));
            Ok(table.deterministic_pass())
        }
        Command::Verify { trace, config, json } => {
            let loaded = read_trace_csv(&trace)?;
            if let Some(path) = config {
                let cfg = parse_config(&path)?;
                let (env, spec) = cfg.resolve(loaded.trace.len() as u64)?;
                if env_id(&env) != loaded.trace.env_id || spec != loaded.trace.spec {
                    return Err(optibandit::Error::Trace(
                        "trace was not produced by this config".into(),
                    ));
                }
            }
            let report = verify_trace(&loaded.trace, &loaded.env)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                let v = |ok: bool| if ok { "pass" } else { "FAIL" };
                println!("replication {} ({} steps)", report.replication, report.horizon);
                println!("consistency: {}", v(report.consistency.consistent));
                println!(
                    "good event: {} ({} violations)",
                    if report.good_event.holds { "holds" } else { "violated" },
                    report.good_event.violation_count
                );
                println!("forced deviation: {}", v(report.deviation.all_pass));
                println!("pulls within threshold: {}", v(report.pulls_within_threshold));
                println!("pseudo-regret: {}", report.regret.regret);
            }
            Ok(report.deterministic_pass())
        }
        Command::Coverage(args) => {
            let cfg = parse_config(&args.config)?;
            let res = harness::coverage(&cfg, &args.options())?;
            println!(
                "violations: {} / {} (frequency {})",
                res.violations,
                res.reps,
                harness::summary::sig6(res.frequency)
            );
            Ok(true)
        }
        Command::Show { manifest } => {
            print!("{}", harness::show(&manifest)?);
            Ok(true)
        }
    }
}
