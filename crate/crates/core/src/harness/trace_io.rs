//! Trace CSV files.
//!
//! Layout:
//!
//! ```text
//! # optibandit-trace v1
//! # replication=<r> seed=<s> num_arms=<K> env_id=<hex>
//! # env=<environment json>
//! # policy=<policy json>
//! replication,t,arm,reward,est_0,rad_0,idx_0,xi_0,...,pull_count_before
//! ```
//!
//! `t` starts at 1. Floats use the shortest representation that parses back to
//! the same bits, so a trace read from disk verifies exactly like the one that
//! was written. Uninitialized estimates are written as `NaN`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::env::Environment;
use crate::error::{Error, Result};
use crate::policy::{BanditTrace, PolicySpec};

pub const TRACE_MAGIC: &str = "# optibandit-trace v1";

pub fn trace_header(num_arms: usize) -> Vec<String> {
    let mut h = vec!["replication".into(), "t".into(), "arm".into(), "reward".into()];
    for i in 0..num_arms {
        for col in ["est", "rad", "idx", "xi"] {
            h.push(format!("{col}_{i}"));
        }
    }
    h.push("pull_count_before".into());
    h
}

pub fn write_trace_csv(path: &Path, trace: &BanditTrace, env: &Environment) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    write_trace(file, trace, env)
}

pub fn write_trace<W: Write>(mut out: W, trace: &BanditTrace, env: &Environment) -> Result<()> {
    let k = trace.num_arms;
    writeln!(out, "{TRACE_MAGIC}")?;
    writeln!(
        out,
        "# replication={} seed={} num_arms={} env_id={}",
        trace.replication, trace.seed, k, trace.env_id
    )?;
    writeln!(out, "# env={}", serde_json::to_string(env)?)?;
    writeln!(out, "# policy={}", serde_json::to_string(&trace.spec)?)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(trace_header(k))?;
    let mut row: Vec<String> = Vec::with_capacity(5 + 4 * k);
    for t in 0..trace.len() {
        row.clear();
        row.push(trace.replication.to_string());
        row.push((t + 1).to_string());
        row.push(trace.arms[t].to_string());
        row.push(trace.rewards[t].to_string());
        let (e, r, x, p) = (
            trace.estimates_at(t),
            trace.radii_at(t),
            trace.indices_at(t),
            trace.perturbations_at(t),
        );
        for i in 0..k {
            row.push(e[i].to_string());
            row.push(r[i].to_string());
            row.push(x[i].to_string());
            row.push(p[i].to_string());
        }
        row.push(trace.pull_count_before[t].to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// A trace read back from disk with the environment it was recorded against.
#[derive(Debug, Clone)]
pub struct LoadedTrace {
    pub trace: BanditTrace,
    pub env: Environment,
}

pub fn read_trace_csv(path: &Path) -> Result<LoadedTrace> {
    read_trace(BufReader::new(File::open(path)?))
}

pub fn read_trace<R: BufRead>(mut input: R) -> Result<LoadedTrace> {
    let mut line = String::new();
    let mut next_comment = |what: &str| -> Result<String> {
        line.clear();
        input.read_line(&mut line)?;
        let l = line.trim_end_matches(['\n', '\r']);
        if !l.starts_with('#') {
            return Err(Error::Trace(format!("missing {what} line")));
        }
        Ok(l.to_string())
    };
    if next_comment("magic")? != TRACE_MAGIC {
        return Err(Error::Trace("not a trace file or unsupported version".into()));
    }
    let meta = next_comment("metadata")?;
    let mut replication = None;
    let mut seed = None;
    let mut num_arms = None;
    let mut env_id = None;
    for kv in meta.trim_start_matches('#').split_whitespace() {
        let (key, value) = kv
            .split_once('=')
            .ok_or_else(|| Error::Trace(format!("bad metadata entry `{kv}`")))?;
        let bad = |_| Error::Trace(format!("bad value for {key}"));
        match key {
            "replication" => replication = Some(value.parse::<u64>().map_err(bad)?),
            "seed" => seed = Some(value.parse::<u64>().map_err(bad)?),
            "num_arms" => num_arms = Some(value.parse::<usize>().map_err(bad)?),
            "env_id" => env_id = Some(value.to_string()),
            _ => return Err(Error::Trace(format!("unknown metadata key `{key}`"))),
        }
    }
    let missing = |k: &str| Error::Trace(format!("metadata lacks {k}"));
    let replication = replication.ok_or_else(|| missing("replication"))?;
    let seed = seed.ok_or_else(|| missing("seed"))?;
    let k = num_arms.ok_or_else(|| missing("num_arms"))?;
    let env_id = env_id.ok_or_else(|| missing("env_id"))?;

    let env_line = next_comment("env")?;
    let env: Environment = serde_json::from_str(
        env_line
            .strip_prefix("# env=")
            .ok_or_else(|| Error::Trace("malformed env line".into()))?,
    )?;
    env.validate()?;
    let policy_line = next_comment("policy")?;
    let spec: PolicySpec = serde_json::from_str(
        policy_line
            .strip_prefix("# policy=")
            .ok_or_else(|| Error::Trace("malformed policy line".into()))?,
    )?;
    if env.num_arms() != k {
        return Err(Error::Trace(format!(
            "metadata says {k} arms, environment has {}",
            env.num_arms()
        )));
    }

    let mut trace = BanditTrace::new(replication, seed, &env, spec);
    trace.env_id = env_id;
    let mut rdr = csv::Reader::from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != trace_header(k) {
        return Err(Error::Trace("unexpected column header".into()));
    }
    let f = |s: &str, t: usize| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|_| Error::Trace(format!("row {t}: bad number `{s}`")))
    };
    for (row_no, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let t = row_no + 1;
        if rec.len() != 5 + 4 * k {
            return Err(Error::Trace(format!("row {t}: expected {} fields", 5 + 4 * k)));
        }
        let int = |s: &str| -> Result<u64> {
            s.parse::<u64>()
                .map_err(|_| Error::Trace(format!("row {t}: bad integer `{s}`")))
        };
        if int(&rec[0])? != replication {
            return Err(Error::Trace(format!("row {t}: replication column disagrees")));
        }
        if int(&rec[1])? != t as u64 {
            return Err(Error::Trace(format!("row {t}: time column out of sequence")));
        }
        let arm = int(&rec[2])? as usize;
        if arm >= k {
            return Err(Error::Trace(format!("row {t}: arm {arm} out of range")));
        }
        trace.arms.push(arm);
        trace.rewards.push(f(&rec[3], t)?);
        for i in 0..k {
            let base = 4 + 4 * i;
            trace.estimates.push(f(&rec[base], t)?);
            trace.radii.push(f(&rec[base + 1], t)?);
            trace.indices.push(f(&rec[base + 2], t)?);
            trace.perturbations.push(f(&rec[base + 3], t)?);
        }
        trace.pull_count_before.push(int(&rec[4 + 4 * k])?);
    }
    Ok(LoadedTrace { trace, env })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::EstimatorSpec;
    use crate::policy::run_episode;
    use crate::radius::RadiusSpec;

    #[test]
    fn round_trip_is_bit_exact() {
        let env = Environment::gaussian(&[0.40319880587097845, 0.1, 0.0], 1.0).unwrap();
        let spec = PolicySpec::uniform(EstimatorSpec::EmpiricalMean, RadiusSpec::UcbHoeffding { horizon: 200 }, 3);
        let trace = run_episode(&spec, &env, 200, 7, 4).unwrap();
        let mut buf = Vec::new();
        write_trace(&mut buf, &trace, &env).unwrap();
        let loaded = read_trace(buf.as_slice()).unwrap();
        assert_eq!(loaded.env, env);
        let (a, b) = (&loaded.trace, &trace);
        assert_eq!(a.arms, b.arms);
        assert_eq!(a.pull_count_before, b.pull_count_before);
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a.rewards), bits(&b.rewards));
        assert_eq!(bits(&a.estimates), bits(&b.estimates));
        assert_eq!(bits(&a.radii), bits(&b.radii));
        assert_eq!(bits(&a.indices), bits(&b.indices));
        assert_eq!(a.env_id, b.env_id);
        assert_eq!(a.spec, b.spec);
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_trace("hello\n".as_bytes()).is_err());
        let env = Environment::bernoulli(&[0.5, 0.4]).unwrap();
        let spec = PolicySpec::uniform(EstimatorSpec::EmpiricalMean, RadiusSpec::UcbHoeffding { horizon: 10 }, 2);
        let trace = run_episode(&spec, &env, 10, 1, 0).unwrap();
        let mut buf = Vec::new();
        write_trace(&mut buf, &trace, &env).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let broken = text.replacen("\n0,3,", "\n0,9,", 1);
        assert!(read_trace(broken.as_bytes()).is_err());
    }
}
