//! The JSON report every subcommand emits.

use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Error => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub millis: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub output: Value,
    pub witnesses: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub timing: Timing,
}

/// What a subcommand found: a pass carries no witnesses, a fail at least one.
#[derive(Debug, Default)]
pub struct Findings {
    pub output: Value,
    pub witnesses: Vec<Value>,
}

impl Findings {
    pub fn pass(output: Value) -> Self {
        Findings { output, witnesses: Vec::new() }
    }

    pub fn witness(&mut self, w: Value) {
        self.witnesses.push(w);
    }
}

/// Input or usage problem; exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

impl Report {
    pub fn new(command: &str, inputs: Value, result: Result<Findings, InputError>, elapsed: Duration) -> Report {
        let timing = Timing { millis: elapsed.as_millis() as u64 };
        match result {
            Ok(f) => Report {
                command: command.to_string(),
                inputs,
                verdict: if f.witnesses.is_empty() { Verdict::Pass } else { Verdict::Fail },
                output: f.output,
                witnesses: f.witnesses,
                error: None,
                timing,
            },
            Err(InputError(msg)) => Report {
                command: command.to_string(),
                inputs,
                verdict: Verdict::Error,
                output: Value::Null,
                witnesses: Vec::new(),
                error: Some(msg),
                timing,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Writes the report to `<dir>/<command>.json`, spaces replaced by dashes.
    pub fn write_to(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        let name = format!("{}.json", self.command.replace(' ', "-"));
        std::fs::write(dir.join(name), self.to_json() + "\n")
    }
}
