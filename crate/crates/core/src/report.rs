//! Machine-readable verification reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

/// One term of a nonzero residual: a diagram or monomial and its
/// coefficient as `num/den`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualTerm {
    pub term: String,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub inputs: BTreeMap<String, String>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<Vec<ResidualTerm>>,
    pub wall_time_us: u64,
}

impl CheckRecord {
    /// Runs `check`, which returns the residual terms (empty for a pass).
    /// An `Err` becomes a record with status `error`, the message stored
    /// under the `error` input.
    pub fn run(
        name: impl Into<String>,
        inputs: &[(&str, String)],
        check: impl FnOnce() -> Result<Vec<ResidualTerm>>,
    ) -> CheckRecord {
        let start = Instant::now();
        let outcome = check();
        let wall_time_us = start.elapsed().as_micros() as u64;
        let mut inputs: BTreeMap<String, String> = inputs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        let (status, residual) = match outcome {
            Ok(r) if r.is_empty() => (Status::Pass, None),
            Ok(r) => (Status::Fail, Some(r)),
            Err(e) => {
                inputs.insert("error".into(), e.to_string());
                (Status::Error, None)
            }
        };
        CheckRecord {
            name: name.into(),
            inputs,
            status,
            residual,
            wall_time_us,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub command: Vec<String>,
    pub config: BTreeMap<String, String>,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    /// Command output other than checks (tables, term lists).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
}

impl Report {
    pub fn new(command: Vec<String>, config: BTreeMap<String, String>) -> Report {
        Report {
            tool_version: TOOL_VERSION.to_string(),
            command,
            config,
            checks: Vec::new(),
            summary: Summary::default(),
            data: None,
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.checks.push(record);
        self.summary = tally(&self.checks);
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = CheckRecord>) {
        self.checks.extend(records);
        self.summary = tally(&self.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.summary.fail == 0 && self.summary.error == 0
    }

    /// Pretty JSON with object keys sorted, so that any JSON parser that
    /// re-serializes with sorted keys reproduces it byte for byte.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&value).expect("value serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Report> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "jacobi {} :: {}", self.tool_version, self.command.join(" ")).unwrap();
        for (k, v) in &self.config {
            writeln!(out, "  config {k} = {v}").unwrap();
        }
        if let Some(data) = &self.data {
            write_data(&mut out, data, 1);
        }
        for c in &self.checks {
            let inputs: Vec<String> = c.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(
                out,
                "[{}] {} ({}) {}us",
                c.status.as_str(),
                c.name,
                inputs.join(", "),
                c.wall_time_us
            )
            .unwrap();
            for t in c.residual.iter().flatten() {
                writeln!(out, "    residual {} · {}", t.coefficient, t.term).unwrap();
            }
        }
        let s = &self.summary;
        writeln!(
            out,
            "summary: {} checks, {} pass, {} fail, {} error",
            s.total, s.pass, s.fail, s.error
        )
        .unwrap();
        out
    }
}

fn write_data(out: &mut String, v: &serde_json::Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        serde_json::Value::Array(items) => {
            for item in items {
                match item {
                    serde_json::Value::Object(_) | serde_json::Value::Array(_) => {
                        writeln!(out, "{pad}-").unwrap();
                        write_data(out, item, indent + 1);
                    }
                    other => writeln!(out, "{pad}- {}", scalar(other)).unwrap(),
                }
            }
        }
        serde_json::Value::Object(map) => {
            for (k, item) in map {
                match item {
                    serde_json::Value::Object(_) | serde_json::Value::Array(_) => {
                        writeln!(out, "{pad}{k}:").unwrap();
                        write_data(out, item, indent + 1);
                    }
                    other => writeln!(out, "{pad}{k}: {}", scalar(other)).unwrap(),
                }
            }
        }
        other => writeln!(out, "{pad}{}", scalar(other)).unwrap(),
    }
}

fn scalar(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn tally(checks: &[CheckRecord]) -> Summary {
    let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
    Summary {
        total: checks.len(),
        pass: count(Status::Pass),
        fail: count(Status::Fail),
        error: count(Status::Error),
    }
}
