//! The run report every subcommand prints to stdout: one JSON object with
//! stable key order and floats rounded to 12 significant digits, so equal
//! inputs produce byte-identical output.

use serde::Serialize;
use std::collections::BTreeMap;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Rounds to 12 significant digits for stable report formatting.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("round-trip")
}

#[derive(Serialize, Debug)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
}

impl CheckOutcome {
    pub fn pass(name: &str) -> Self {
        CheckOutcome { name: name.into(), pass: true, max_error: None, details: None }
    }

    pub fn fail(name: &str, details: serde_json::Value) -> Self {
        CheckOutcome { name: name.into(), pass: false, max_error: None, details: Some(details) }
    }

    pub fn measured(name: &str, pass: bool, max_error: f64) -> Self {
        CheckOutcome {
            name: name.into(),
            pass,
            max_error: Some(sig12(max_error)),
            details: None,
        }
    }

    pub fn with_details(mut self, details: serde_json::Value) -> Self {
        self.details = Some(details);
        self
    }
}

#[derive(Serialize, Debug)]
pub struct RunReport {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub results: Vec<CheckOutcome>,
    pub exit_code: i32,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.into(),
            inputs: BTreeMap::new(),
            results: Vec::new(),
            exit_code: EXIT_PASS,
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) {
        self.inputs.insert(key.to_string(), value.to_string());
    }

    pub fn push(&mut self, outcome: CheckOutcome) {
        if !outcome.pass {
            self.exit_code = EXIT_FAIL;
        }
        self.results.push(outcome);
    }

    /// Prints the report and returns the exit code.
    pub fn emit(&self) -> i32 {
        println!("{}", serde_json::to_string_pretty(self).expect("serializable"));
        self.exit_code
    }
}
