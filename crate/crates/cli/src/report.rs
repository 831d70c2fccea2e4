use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use time::format_description::well_known::Rfc3339;
use time::OffsetDateTime;

pub const SCHEMA_VERSION: u32 = 1;

/// One named pass/fail check with the value it was decided on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: Value,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: impl Serialize, passed: bool) -> Self {
        Self {
            name: name.into(),
            value: serde_json::to_value(value).unwrap_or(Value::Null),
            passed,
        }
    }

    /// `value < tol`.
    pub fn below(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self::new(name, value, value < tol)
    }
}

/// What a command produced, before it is stamped and written.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub result: Value,
    pub checks: Vec<Check>,
    /// Human-readable lines for standard output.
    pub summary: Vec<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// The document written by every verb. Everything except `timestamp` is a
/// function of the command line (threads and output path excluded).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub timestamp: String,
    pub config: Value,
    pub result: Value,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str, config: Value, outcome: &Outcome) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: "qholo".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            timestamp: now(),
            config,
            result: outcome.result.clone(),
            checks: outcome.checks.clone(),
            passed: outcome.passed(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if path == Path::new("-") {
            std::io::stdout().write_all(self.to_json()?.as_bytes())?;
            return Ok(());
        }
        fs::write(path, self.to_json()?).with_context(|| format!("writing {}", path.display()))
    }
}

fn now() -> String {
    OffsetDateTime::now_utc()
        .format(&Rfc3339)
        .unwrap_or_else(|_| "unknown".into())
}
