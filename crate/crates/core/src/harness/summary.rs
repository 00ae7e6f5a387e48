//! Human-readable and CSV summaries.

use std::fmt::Write as _;

use crate::error::Result;
use crate::verify::AggregateReport;

/// `x` rounded to six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        let decimals = (5 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

pub const SUMMARY_HEADER: [&str; 5] = ["arm", "gap", "mean_pulls", "m0", "pull_bound"];

pub struct SummaryInput<'a> {
    pub horizon: u64,
    pub seed: u64,
    pub gaps: &'a [f64],
    pub m0: &'a [Option<u64>],
    pub aggregate: &'a AggregateReport,
}

pub fn summary_csv(s: &SummaryInput<'_>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SUMMARY_HEADER)?;
    for (i, gap) in s.gaps.iter().enumerate() {
        let opt = |v: Option<u64>| v.map_or_else(String::new, |x| x.to_string());
        w.write_record([
            i.to_string(),
            sig6(*gap),
            sig6(s.aggregate.mean_pulls[i]),
            opt(s.m0[i]),
            opt(s.aggregate.pull_bounds[i]),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| crate::error::Error::Internal(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn summary_text(s: &SummaryInput<'_>) -> String {
    let a = s.aggregate;
    let verdict = |ok: bool| if ok { "pass" } else { "FAIL" };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "replications: {}  horizon: {}  seed: {}",
        a.replications, s.horizon, s.seed
    );
    let _ = writeln!(out, "mean regret: {} (sd {})", sig6(a.mean_regret), sig6(a.std_regret));
    let limit = a
        .good_event_max_frequency
        .map_or_else(|| "no limit".to_string(), |f| format!("limit {}", sig6(f)));
    let _ = writeln!(
        out,
        "good-event failures: {} / {} ({limit}): {}",
        a.good_event_failures,
        a.replications,
        verdict(a.good_event_pass)
    );
    for (i, mean) in a.mean_pulls.iter().enumerate() {
        let bound = a.pull_bounds[i].map_or_else(|| "-".to_string(), |b| b.to_string());
        let _ = writeln!(out, "arm {i}: E[N]={}, bound={bound}", sig6(*mean));
    }
    let _ = writeln!(out, "pull bounds: {}", verdict(a.pull_bound_pass));
    let _ = writeln!(
        out,
        "deviation failures: {}  threshold failures: {}  consistency failures: {}",
        a.deviation_failures, a.threshold_failures, a.consistency_failures
    );
    let _ = writeln!(out, "deterministic checks: {}", verdict(a.deterministic_pass));
    out
}
