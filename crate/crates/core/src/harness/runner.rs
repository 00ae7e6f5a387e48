//! Replicated runs, horizon sweeps and coverage estimates.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::summary::{sig6, summary_csv, summary_text, SummaryInput};
use super::trace_io::write_trace_csv;
use crate::error::{Error, Result};
use crate::policy::run_episode;
use crate::verify::{aggregate, coverage_estimate, verify_trace, AggregateReport, CoverageResult, VerificationReport};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Where to write outputs; `None` keeps everything in memory.
    pub out_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    pub write_traces: bool,
    pub seed: Option<u64>,
    pub replications: Option<u64>,
}

impl RunOptions {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn to_dir(dir: impl Into<PathBuf>) -> Self {
        Self {
            out_dir: Some(dir.into()),
            write_traces: true,
            ..Self::default()
        }
    }

    fn apply(&self, config: &ExperimentConfig) -> Result<ExperimentConfig> {
        let mut c = config.clone();
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(r) = self.replications {
            c.replications = r;
        }
        if let Some(w) = self.workers {
            c.workers = Some(w);
        }
        if let Some(d) = &self.out_dir {
            c.output_dir = Some(d.clone());
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total_ms: f64,
    pub per_replication_ms: Vec<f64>,
}

/// Index of everything a run wrote. Paths are relative to the output directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub config_hash: String,
    pub seed: u64,
    pub horizon: u64,
    pub replications: u64,
    pub workers: usize,
    pub config: String,
    pub traces: Vec<String>,
    pub reports: Vec<String>,
    pub aggregate: String,
    pub summary_csv: String,
    pub summary_txt: String,
    /// Replications whose deterministic checks failed.
    pub deterministic_failures: Vec<u64>,
    pub timings: Timings,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub config: ExperimentConfig,
    pub reports: Vec<VerificationReport>,
    pub aggregate: AggregateReport,
    pub gaps: Vec<f64>,
    pub m0: Vec<Option<u64>>,
    pub summary: String,
    pub manifest: Option<RunManifest>,
}

impl RunOutcome {
    pub fn deterministic_pass(&self) -> bool {
        self.aggregate.deterministic_pass
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Internal(format!("worker pool: {e}")))
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn trace_file_name(rep: u64) -> String {
    format!("traces/rep_{rep:05}.csv")
}

pub fn report_file_name(rep: u64) -> String {
    format!("reports/rep_{rep:05}.json")
}

/// Run every replication of `config` at its own horizon.
pub fn run(config: &ExperimentConfig, opts: &RunOptions) -> Result<RunOutcome> {
    let config = opts.apply(config)?;
    run_at(&config, config.horizon, config.output_dir.as_deref(), opts.write_traces)
}

fn run_at(config: &ExperimentConfig, horizon: u64, out: Option<&Path>, write_traces: bool) -> Result<RunOutcome> {
    let start = Instant::now();
    let (env, spec) = config.resolve(horizon)?;
    let workers = config.workers.unwrap_or_else(default_workers);
    if let Some(dir) = out {
        fs::create_dir_all(dir.join("reports"))?;
        if write_traces {
            fs::create_dir_all(dir.join("traces"))?;
        }
        write_json(&dir.join("config.json"), config)?;
    }
    let results: Vec<(VerificationReport, f64)> = pool(workers)?.install(|| {
        (0..config.replications)
            .into_par_iter()
            .map(|rep| -> Result<(VerificationReport, f64)> {
                let t0 = Instant::now();
                let trace = run_episode(&spec, &env, horizon, config.seed, rep)?;
                let report = verify_trace(&trace, &env)?;
                if let Some(dir) = out {
                    if write_traces {
                        write_trace_csv(&dir.join(trace_file_name(rep)), &trace, &env)?;
                    }
                    write_json(&dir.join(report_file_name(rep)), &report)?;
                }
                Ok((report, t0.elapsed().as_secs_f64() * 1e3))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let (reports, per_rep_ms): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let agg = aggregate(&reports, config.checks.good_event_max_frequency)?;
    let gaps = env.gap_profile().gaps;
    let mut m0 = vec![None; env.num_arms()];
    for th in &reports[0].thresholds {
        m0[th.arm] = Some(th.m0);
    }
    let input = SummaryInput {
        horizon,
        seed: config.seed,
        gaps: &gaps,
        m0: &m0,
        aggregate: &agg,
    };
    let summary = summary_text(&input);
    let manifest = match out {
        Some(dir) => {
            write_json(&dir.join("aggregate.json"), &agg)?;
            fs::write(dir.join("summary.csv"), summary_csv(&input)?)?;
            fs::write(dir.join("summary.txt"), &summary)?;
            let manifest = RunManifest {
                version: env!("CARGO_PKG_VERSION").to_string(),
                config_hash: config.semantic_hash(),
                seed: config.seed,
                horizon,
                replications: config.replications,
                workers,
                config: "config.json".into(),
                traces: if write_traces {
                    (0..config.replications).map(trace_file_name).collect()
                } else {
                    Vec::new()
                },
                reports: (0..config.replications).map(report_file_name).collect(),
                aggregate: "aggregate.json".into(),
                summary_csv: "summary.csv".into(),
                summary_txt: "summary.txt".into(),
                deterministic_failures: reports
                    .iter()
                    .filter(|r| !r.deterministic_pass())
                    .map(|r| r.replication)
                    .collect(),
                timings: Timings {
                    total_ms: start.elapsed().as_secs_f64() * 1e3,
                    per_replication_ms: per_rep_ms,
                },
            };
            write_json(&dir.join("manifest.json"), &manifest)?;
            Some(manifest)
        }
        None => None,
    };
    Ok(RunOutcome {
        config: config.clone(),
        reports,
        aggregate: agg,
        gaps,
        m0,
        summary,
        manifest,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub horizon: u64,
    pub mean_regret: f64,
    pub std_regret: f64,
    pub regret_over_log_horizon: f64,
    pub mean_pulls: Vec<f64>,
    pub deterministic_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// max / min of regret over log horizon across rows.
    pub log_ratio_spread: f64,
}

impl SweepTable {
    pub fn deterministic_pass(&self) -> bool {
        self.rows.iter().all(|r| r.deterministic_pass)
    }

    pub fn to_csv(&self) -> Result<String> {
        let k = self.rows.first().map_or(0, |r| r.mean_pulls.len());
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec![
            "horizon".to_string(),
            "mean_regret".into(),
            "std_regret".into(),
            "regret_over_log_horizon".into(),
        ];
        header.extend((0..k).map(|i| format!("mean_pulls_{i}")));
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![
                r.horizon.to_string(),
                sig6(r.mean_regret),
                sig6(r.std_regret),
                sig6(r.regret_over_log_horizon),
            ];
            rec.extend(r.mean_pulls.iter().map(|x| sig6(*x)));
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Repeat the run at each horizon of the config's `sweep` list.
pub fn sweep(config: &ExperimentConfig, opts: &RunOptions) -> Result<SweepTable> {
    let config = opts.apply(config)?;
    let horizons = config
        .sweep
        .clone()
        .ok_or_else(|| Error::config("sweep", "the config has no sweep list"))?;
    if horizons.len() < 2 {
        return Err(Error::config("sweep", "need at least two horizons"));
    }
    let mut rows = Vec::with_capacity(horizons.len());
    for &h in &horizons {
        let sub = config.output_dir.as_ref().map(|d| d.join(format!("T_{h}")));
        let out = run_at(&config, h, sub.as_deref(), opts.write_traces)?;
        let a = &out.aggregate;
        rows.push(SweepRow {
            horizon: h,
            mean_regret: a.mean_regret,
            std_regret: a.std_regret,
            regret_over_log_horizon: a.mean_regret / (h as f64).ln(),
            mean_pulls: a.mean_pulls.clone(),
            deterministic_pass: a.deterministic_pass,
        });
    }
    let ratios = rows.iter().map(|r| r.regret_over_log_horizon);
    let max = ratios.clone().fold(f64::NEG_INFINITY, f64::max);
    let min = ratios.fold(f64::INFINITY, f64::min);
    let table = SweepTable {
        rows,
        log_ratio_spread: max / min,
    };
    if let Some(dir) = &config.output_dir {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("sweep.csv"), table.to_csv()?)?;
        write_json(&dir.join("sweep.json"), &table)?;
    }
    Ok(table)
}

/// Coverage frequency for the arm named in the config's `coverage` section.
pub fn coverage(config: &ExperimentConfig, opts: &RunOptions) -> Result<CoverageResult> {
    let config = opts.apply(config)?;
    let cov = config
        .coverage
        .clone()
        .ok_or_else(|| Error::config("coverage", "the config has no coverage section"))?;
    let (env, spec) = config.resolve(config.horizon)?;
    let workers = config.workers.unwrap_or_else(default_workers);
    pool(workers)?.install(|| {
        coverage_estimate(
            spec.estimator,
            spec.radii[cov.arm],
            &env,
            cov.arm,
            cov.m_max,
            cov.reps,
            config.seed,
        )
    })
}

/// Regenerate the text summary of a finished run from its manifest.
pub fn show(manifest_path: &Path) -> Result<String> {
    let manifest: RunManifest = serde_json::from_str(&fs::read_to_string(manifest_path)?)?;
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let text = fs::read_to_string(dir.join(&manifest.summary_txt))?;
    let mut out = format!(
        "run of {} replications, config {}\n",
        manifest.replications,
        &manifest.config_hash[..12.min(manifest.config_hash.len())]
    );
    out.push_str(&text);
    if !manifest.deterministic_failures.is_empty() {
        out.push_str(&format!(
            "replications failing deterministic checks: {:?}\n",
            manifest.deterministic_failures
        ));
    }
    Ok(out)
}
