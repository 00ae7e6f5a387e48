//! Experiment harness: config files, replicated runs, traces on disk and
//! summaries.

pub mod config;
pub mod runner;
pub mod summary;
pub mod trace_io;

pub use config::{parse_config, ExperimentConfig};
pub use runner::{coverage, run, show, sweep, RunManifest, RunOptions, RunOutcome, SweepRow, SweepTable};
pub use trace_io::{read_trace_csv, write_trace_csv, LoadedTrace};
