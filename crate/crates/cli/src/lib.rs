//! Batch front-end for `graphseq`.
//!
//! [`run`] validates a [`RunConfig`], executes one command and produces a
//! [`Report`] (schema v1): the verbatim config, tool version, timestamp,
//! timings, status, the command's result, and a determinism hash over
//! everything that must not depend on wall time, worker count or output
//! locations.

mod args;
mod commands;
mod resolve;

use std::fs;
use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use args::{Command, OtherSourceArgs, PartitionMethod, Roots, RunConfig, SourceArgs};
pub use commands::Table;

pub const SCHEMA: &str = "graphseq-report/v1";

/// Keys dropped, at any depth, before hashing a report.
pub const HASH_EXCLUDED_KEYS: &[&str] =
    &["timestamp", "timings", "elapsed_ms", "determinism_hash", "jobs", "out", "csv", "out_dir", "reproducible"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("computation failed: {0}")]
    Compute(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 1,
            RunError::Compute(_) => 2,
            RunError::Io(_) => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    /// Some cells timed out (or a merged report was not ok).
    Partial,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub total_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub tool: Tool,
    /// Seconds since the Unix epoch; 0 under `--reproducible`.
    pub timestamp: u64,
    pub config: RunConfig,
    pub status: Status,
    #[serde(default)]
    pub error: Option<String>,
    pub result: Value,
    pub timings: Timings,
    pub determinism_hash: String,
}

fn strip(value: &mut Value) {
    match value {
        Value::Object(map) => {
            map.retain(|k, _| !HASH_EXCLUDED_KEYS.contains(&k.as_str()));
            map.values_mut().for_each(strip);
        }
        Value::Array(items) => items.iter_mut().for_each(strip),
        _ => {}
    }
}

/// Zeroes per-cell timings in place.
fn zero_timings(value: &mut Value) {
    match value {
        Value::Object(map) => {
            if let Some(t) = map.get_mut("elapsed_ms") {
                *t = Value::from(0);
            }
            map.values_mut().for_each(zero_timings);
        }
        Value::Array(items) => items.iter_mut().for_each(zero_timings),
        _ => {}
    }
}

/// SHA-256 of the canonical JSON (sorted keys, no whitespace) of `value`
/// after dropping [`HASH_EXCLUDED_KEYS`].
pub fn hash_value(value: &Value) -> String {
    let mut v = value.clone();
    strip(&mut v);
    let canonical = serde_json::to_string(&v).expect("json");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

impl Report {
    pub fn compute_hash(&self) -> String {
        hash_value(&serde_json::to_value(self).expect("json"))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("json");
        s.push('\n');
        s
    }
}

/// A finished run: the report, its CSV table and the process exit code.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub report: Report,
    pub table: Option<Table>,
    pub exit_code: i32,
}

/// Validates and executes `config` without touching report outputs.
pub fn execute(config: &RunConfig) -> RunOutcome {
    let start = Instant::now();
    let outcome = commands::execute(config);
    let (status, error, mut result, table, exit_code) = match outcome {
        Ok(out) if out.partial => (Status::Partial, None, out.result, Some(out.table), 2),
        Ok(out) => (Status::Ok, None, out.result, Some(out.table), 0),
        Err(e) => (Status::Failed, Some(e.to_string()), Value::Null, None, e.exit_code()),
    };
    let (timestamp, total_ms) = if config.reproducible {
        zero_timings(&mut result);
        (0, 0)
    } else {
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        (now, start.elapsed().as_millis() as u64)
    };
    let mut report = Report {
        schema: SCHEMA.into(),
        tool: Tool { name: "graphseq".into(), version: env!("CARGO_PKG_VERSION").into() },
        timestamp,
        config: config.clone(),
        status,
        error,
        result,
        timings: Timings { total_ms },
        determinism_hash: String::new(),
    };
    report.determinism_hash = report.compute_hash();
    RunOutcome { report, table, exit_code }
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), RunError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| RunError::Io(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))
}

pub fn write_csv(path: &Path, table: &Table) -> Result<(), RunError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| RunError::Io(format!("{}: {e}", path.display()));
    w.write_record(&table.headers).map_err(io)?;
    for row in &table.rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
    write_file(path, &bytes)
}

/// Executes `config` and writes the JSON report (to `--out`) and CSV (to
/// `--csv`). The report is written even when the computation failed.
/// Returns the outcome; an output write failure turns the exit code into 3.
pub fn run(config: &RunConfig) -> RunOutcome {
    let mut outcome = execute(config);
    if let Some(path) = &config.out {
        if let Err(e) = write_file(path, outcome.report.to_json().as_bytes()) {
            eprintln!("graphseq: {e}");
            outcome.exit_code = 3;
        }
    }
    if let (Some(path), Some(table)) = (&config.csv, &outcome.table) {
        if let Err(e) = write_csv(path, table) {
            eprintln!("graphseq: {e}");
            outcome.exit_code = 3;
        }
    }
    outcome
}
