//! Run reports and artifact writing.

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

/// One pass/fail check. `detail` states the measured value and the bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(id: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { id: id.into(), passed, detail: detail.into() }
    }
}

/// A CSV table produced by an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Float cell with full round-trip precision; non-finite values are written
/// as `nan`/`inf` so CSV consumers see them explicitly.
pub fn cell(x: f64) -> String {
    format!("{x:e}")
}

/// What an experiment hands back to the runner.
#[derive(Debug, Default)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub metrics: BTreeMap<String, f64>,
    pub tables: Vec<Table>,
    /// Experiment-specific structured output, stored in the report.
    pub details: BTreeMap<String, Value>,
}

impl Outcome {
    pub fn check(&mut self, id: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(id, passed, detail));
    }

    pub fn metric(&mut self, name: impl Into<String>, value: f64) {
        self.metrics.insert(name.into(), value);
    }

    pub fn detail(&mut self, name: &str, value: impl Serialize) -> Result<()> {
        self.details.insert(name.into(), serde_json::to_value(value)?);
        Ok(())
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub experiment: String,
    pub config: Value,
    pub checks: Vec<Check>,
    pub metrics: BTreeMap<String, f64>,
    pub details: BTreeMap<String, Value>,
    pub passed: bool,
    pub wall_clock_seconds: f64,
    pub artifacts: Vec<PathBuf>,
}

impl RunReport {
    pub fn new(experiment: &str, config: Value, outcome: Outcome, wall_clock_seconds: f64) -> Self {
        let passed = outcome.passed();
        Self {
            experiment: experiment.into(),
            config,
            checks: outcome.checks,
            metrics: outcome.metrics,
            details: outcome.details,
            passed,
            wall_clock_seconds,
            artifacts: Vec::new(),
        }
    }
}

/// Writes the tables and `report.json` into `out/<experiment>/` and appends the
/// report as one line to `out/reports.jsonl`. Returns the updated report.
pub fn persist(mut report: RunReport, tables: &[Table], out: &Path) -> Result<RunReport> {
    let dir = out.join(&report.experiment);
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    for t in tables {
        let path = dir.join(format!("{}.csv", t.name));
        let mut w = csv::Writer::from_path(&path).with_context(|| format!("writing {}", path.display()))?;
        w.write_record(&t.header)?;
        for row in &t.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        report.artifacts.push(path);
    }
    let json_path = dir.join("report.json");
    report.artifacts.push(json_path.clone());
    fs::write(&json_path, serde_json::to_string_pretty(&report)? + "\n")?;
    let log = out.join("reports.jsonl");
    let mut f = OpenOptions::new().create(true).append(true).open(&log)?;
    writeln!(f, "{}", serde_json::to_string(&report)?)?;
    Ok(report)
}
