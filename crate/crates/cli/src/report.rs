//! JSON-lines reports: one `record` line per result, then one `summary`.

use std::io::Write;
use std::path::Path;

use charp::Verdict;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    /// The session in canonical form.
    pub inputs: String,
    pub records: Vec<Value>,
    pub verdict: Verdict,
    pub caveats: Vec<String>,
    pub millis: u128,
    pub version: &'static str,
}

impl Report {
    pub fn new(command: &str, inputs: String) -> Self {
        Report {
            command: command.to_string(),
            inputs,
            records: vec![],
            verdict: Verdict::Pass,
            caveats: vec![],
            millis: 0,
            version: env!("CARGO_PKG_VERSION"),
        }
    }

    pub fn record(&mut self, value: impl Serialize) -> Result<(), CliError> {
        self.records.push(serde_json::to_value(value)?);
        Ok(())
    }

    pub fn caveat(&mut self, text: impl Into<String>) {
        let text = text.into();
        if !self.caveats.contains(&text) {
            self.caveats.push(text);
        }
    }

    /// Folds a sub-result into the overall verdict: any failure fails, any
    /// inconclusive part makes a pass inconclusive.
    pub fn merge(&mut self, v: Verdict) {
        self.verdict = match (self.verdict, v) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        };
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }

    pub fn to_json_lines(&self) -> Result<String, CliError> {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(&json!({
                "type": "record",
                "command": self.command,
                "data": r,
            }))?);
            out.push('\n');
        }
        out.push_str(&serde_json::to_string(&json!({
            "type": "summary",
            "command": self.command,
            "verdict": self.verdict.to_string(),
            "records": self.records.len(),
            "caveats": self.caveats,
            "millis": self.millis as u64,
            "version": self.version,
            "inputs": self.inputs,
        }))?);
        out.push('\n');
        Ok(out)
    }

    /// Writes the report through a temporary file in the same directory and
    /// renames it into place.
    pub fn write_atomic(&self, path: &Path) -> Result<(), CliError> {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(self.to_json_lines()?.as_bytes())?;
        tmp.flush()?;
        tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
        Ok(())
    }
}
