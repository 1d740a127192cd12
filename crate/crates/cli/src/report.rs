//! Check records, reports and their two output formats.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// How `actual` is judged against `expected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// |actual − expected| ≤ tolerance
    Close,
    /// actual ≤ expected + tolerance
    AtMost,
    /// actual ≥ expected − tolerance
    AtLeast,
}

impl Comparison {
    fn symbol(self) -> &'static str {
        match self {
            Comparison::Close => "≈",
            Comparison::AtMost => "≤",
            Comparison::AtLeast => "≥",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(
        name: impl Into<String>,
        comparison: Comparison,
        expected: f64,
        actual: f64,
        tolerance: f64,
    ) -> Self {
        let pass = match comparison {
            Comparison::Close => (actual - expected).abs() <= tolerance,
            Comparison::AtMost => actual <= expected + tolerance,
            Comparison::AtLeast => actual >= expected - tolerance,
        };
        Self {
            name: name.into(),
            expected,
            actual,
            tolerance,
            comparison,
            pass,
        }
    }

    pub fn close(name: impl Into<String>, expected: f64, actual: f64, tolerance: f64) -> Self {
        Self::new(name, Comparison::Close, expected, actual, tolerance)
    }

    pub fn at_most(name: impl Into<String>, bound: f64, actual: f64, tolerance: f64) -> Self {
        Self::new(name, Comparison::AtMost, bound, actual, tolerance)
    }

    pub fn at_least(name: impl Into<String>, bound: f64, actual: f64, tolerance: f64) -> Self {
        Self::new(name, Comparison::AtLeast, bound, actual, tolerance)
    }

    /// Exact count or flag check.
    pub fn equals(name: impl Into<String>, expected: usize, actual: usize) -> Self {
        Self::close(name, expected as f64, actual as f64, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub experiment: String,
    pub seed: u64,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
    pub wall_time_s: f64,
}

impl Report {
    /// Sorts the records by name and fills in the summary.
    pub fn assemble(
        experiment: &str,
        seed: u64,
        mut records: Vec<CheckRecord>,
        wall_time_s: f64,
    ) -> Self {
        records.sort_by(|a, b| a.name.cmp(&b.name));
        let passed = records.iter().filter(|r| r.pass).count();
        let summary = Summary {
            total: records.len(),
            passed,
            failed: records.len() - passed,
            pass: passed == records.len(),
        };
        Self {
            experiment: experiment.to_string(),
            seed,
            records,
            summary,
            wall_time_s,
        }
    }

    pub fn pass(&self) -> bool {
        self.summary.pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Structured,
    Table,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "structured" | "json" => Ok(Format::Structured),
            "table" => Ok(Format::Table),
            other => Err(CliError::UnknownFormat(other.to_string())),
        }
    }
}

pub fn emit(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Structured => {
            let mut s = serde_json::to_string_pretty(report).expect("reports hold finite numbers");
            s.push('\n');
            s.into_bytes()
        }
        Format::Table => table(report).into_bytes(),
    }
}

pub fn parse_structured(bytes: &[u8]) -> Result<Report, CliError> {
    serde_json::from_slice(bytes).map_err(|e| CliError::Parse(e.to_string()))
}

fn table(report: &Report) -> String {
    let width = report
        .records
        .iter()
        .map(|r| r.name.chars().count())
        .max()
        .unwrap_or(4)
        .max(5);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "experiment {} (seed {})",
        report.experiment, report.seed
    );
    let _ = writeln!(
        out,
        "{:<width$}  {:>14}  {:>1}  {:>14}  {:>9}  result",
        "check", "actual", "", "expected", "tol"
    );
    for r in &report.records {
        let _ = writeln!(
            out,
            "{:<width$}  {:>14.8e}  {}  {:>14.8e}  {:>9.1e}  {}",
            r.name,
            r.actual,
            r.comparison.symbol(),
            r.expected,
            r.tolerance,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    let _ = writeln!(
        out,
        "passed {} / failed {} / total {}  ({:.3} s)",
        report.summary.passed, report.summary.failed, report.summary.total, report.wall_time_s
    );
    out
}
