use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Map, Value};

use twistprod_core::verify::{IdentityReport, Verdict};

use crate::config::RunConfig;

pub const SCHEMA: &str = "twistprod-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

impl From<Verdict> for Status {
    fn from(v: Verdict) -> Self {
        Status::from_bool(v.is_pass())
    }
}

/// One (check, prime, m) line of a report.
#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub check: String,
    pub prime: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub second_prime: Option<u64>,
    pub m: Option<u32>,
    pub status: Status,
    pub max_residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub comparison_horizon: Option<usize>,
    pub worst_index: Option<usize>,
    pub details: Vec<String>,
    /// Full structured result of the underlying check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
}

impl Row {
    pub fn new(check: &str, prime: Option<u64>, m: Option<u32>, status: Status) -> Self {
        Row {
            check: check.to_string(),
            prime,
            second_prime: None,
            m,
            status,
            max_residual: None,
            tolerance: None,
            comparison_horizon: None,
            worst_index: None,
            details: Vec::new(),
            result: None,
        }
    }

    pub fn skipped(check: &str, prime: u64, m: Option<u32>, reason: impl Into<String>) -> Self {
        Row::new(check, Some(prime), m, Status::Skipped).with_detail(reason)
    }

    pub fn failed(check: &str, prime: Option<u64>, m: Option<u32>, reason: impl Into<String>) -> Self {
        Row::new(check, prime, m, Status::Fail).with_detail(reason)
    }

    pub fn with_detail(mut self, line: impl Into<String>) -> Self {
        self.details.push(line.into());
        self
    }

    pub fn with_residual(mut self, residual: f64, tolerance: f64) -> Self {
        self.max_residual = Some(residual);
        self.tolerance = Some(tolerance);
        self
    }

    pub fn with_result<S: Serialize>(mut self, value: &S) -> Self {
        self.result = serde_json::to_value(value).ok();
        self
    }

    pub fn from_identity(report: &IdentityReport) -> Self {
        Row {
            check: report.identity_name.clone(),
            prime: Some(report.prime),
            second_prime: report.second_prime,
            m: report.m,
            status: report.verdict.into(),
            max_residual: Some(report.max_residual),
            tolerance: Some(report.tolerance),
            comparison_horizon: Some(report.comparison_horizon),
            worst_index: Some(report.worst_index),
            details: report.details.clone(),
            result: serde_json::to_value(report).ok(),
        }
    }
}

/// Metadata of the data set a report was computed from.
#[derive(Clone, Debug, Serialize)]
pub struct DataSummary {
    pub label: String,
    pub conductor: Option<u64>,
    pub truncation: usize,
    pub precision: &'static str,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub data: DataSummary,
    pub rows: Vec<Row>,
    /// Command-specific JSON members.
    pub extra: Map<String, Value>,
    /// Lines printed before the table in text output.
    pub preamble: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn verdict(&self) -> Status {
        Status::from_bool(self.failed == 0)
    }
}

impl Report {
    pub fn new(command: &str, data: DataSummary) -> Self {
        Report {
            command: command.to_string(),
            data,
            rows: Vec::new(),
            extra: Map::new(),
            preamble: Vec::new(),
        }
    }

    pub fn summary(&self) -> Summary {
        let mut s = Summary::default();
        for row in &self.rows {
            match row.status {
                Status::Pass => s.passed += 1,
                Status::Fail => s.failed += 1,
                Status::Skipped => s.skipped += 1,
            }
        }
        s
    }

    pub fn exit_code(&self) -> i32 {
        if self.summary().failed == 0 {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self, config: &RunConfig, timestamp: Option<u64>) -> Value {
        let summary = self.summary();
        let mut root = Map::new();
        root.insert("schema".into(), json!(SCHEMA));
        root.insert("command".into(), json!(self.command));
        if let Some(t) = timestamp {
            root.insert("timestamp".into(), json!(t));
        }
        root.insert("config".into(), serde_json::to_value(config).unwrap_or(Value::Null));
        root.insert("data".into(), serde_json::to_value(&self.data).unwrap_or(Value::Null));
        root.insert("results".into(), serde_json::to_value(&self.rows).unwrap_or(Value::Null));
        for (k, v) in &self.extra {
            root.insert(k.clone(), v.clone());
        }
        root.insert(
            "summary".into(),
            json!({
                "passed": summary.passed,
                "failed": summary.failed,
                "skipped": summary.skipped,
                "verdict": summary.verdict(),
            }),
        );
        Value::Object(root)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} on {} (conductor {}, N = {}, {} precision)",
            self.command,
            self.data.label,
            self.data
                .conductor
                .map_or_else(|| "unknown".to_string(), |q| q.to_string()),
            self.data.truncation,
            self.data.precision
        );
        for line in &self.preamble {
            let _ = writeln!(out, "{line}");
        }
        if !self.rows.is_empty() {
            let _ = writeln!(
                out,
                "{:<28} {:>5} {:>3} {:>7} {:>11} {:>11} {:>8}  note",
                "check", "p", "m", "status", "residual", "tolerance", "horizon"
            );
            for row in &self.rows {
                let prime = match (row.prime, row.second_prime) {
                    (Some(p), Some(q)) => format!("{p},{q}"),
                    (Some(p), None) => p.to_string(),
                    _ => "-".into(),
                };
                let _ = writeln!(
                    out,
                    "{:<28} {:>5} {:>3} {:>7} {:>11} {:>11} {:>8}  {}",
                    row.check,
                    prime,
                    row.m.map_or_else(|| "-".into(), |m| m.to_string()),
                    row.status.as_str(),
                    fmt_opt(row.max_residual),
                    fmt_opt(row.tolerance),
                    row.comparison_horizon
                        .map_or_else(|| "-".into(), |h| h.to_string()),
                    row.details.first().map(String::as_str).unwrap_or("")
                );
            }
        }
        let s = self.summary();
        let _ = writeln!(
            out,
            "summary: {} passed, {} failed, {} skipped: {}",
            s.passed,
            s.failed,
            s.skipped,
            s.verdict().as_str().to_uppercase()
        );
        out
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    match x {
        Some(v) => format!("{v:.3e}"),
        None => "-".into(),
    }
}
