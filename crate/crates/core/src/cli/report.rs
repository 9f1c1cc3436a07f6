//! Verification reports: plain text for people, JSON for machines.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;
use serde_json::Value;

use crate::check::{Check, Residual};

#[derive(Clone, Debug, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub passed: bool,
    pub residuals: Vec<Residual>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub passed: bool,
    /// Sorted by name.
    pub checks: Vec<CheckSummary>,
    pub witnesses: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            passed: true,
            checks: Vec::new(),
            witnesses: BTreeMap::new(),
            seed: None,
        }
    }

    pub fn check(&mut self, c: &Check) {
        self.push_check(c.name.clone(), c.residuals.clone());
    }

    /// Record a check under a qualified name, e.g. "u_pi/cocycle".
    pub fn check_as(&mut self, name: impl Into<String>, c: &Check) {
        self.push_check(name.into(), c.residuals.clone());
    }

    pub fn push_check(&mut self, name: String, residuals: Vec<Residual>) {
        let pos = self.checks.partition_point(|c| c.name <= name);
        if pos > 0 && self.checks[pos - 1].name == name {
            self.checks[pos - 1].residuals.extend(residuals);
            self.checks[pos - 1].passed = self.checks[pos - 1].residuals.is_empty();
        } else {
            self.checks.insert(
                pos,
                CheckSummary {
                    name,
                    passed: residuals.is_empty(),
                    residuals,
                },
            );
        }
        self.passed = self.checks.iter().all(|c| c.passed);
    }

    /// A failing check carrying a single residual.
    pub fn fail(&mut self, name: &str, location: impl Into<String>, value: impl Into<String>) {
        self.push_check(name.to_string(), vec![Residual::new(location, value)]);
    }

    pub fn witness(&mut self, key: &str, value: impl Serialize) {
        self.witnesses.insert(
            key.to_string(),
            serde_json::to_value(value).expect("serializable witness"),
        );
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable report") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "command: {}", self.command).unwrap();
        if let Some(seed) = self.seed {
            writeln!(s, "seed: {seed}").unwrap();
        }
        for c in &self.checks {
            let mark = if c.passed { "pass" } else { "FAIL" };
            writeln!(s, "check {}: {mark}", c.name).unwrap();
            for r in &c.residuals {
                writeln!(s, "  at {}: {}", r.location, r.value).unwrap();
            }
        }
        for (k, v) in &self.witnesses {
            writeln!(s, "{k}: {}", text_value(v)).unwrap();
        }
        writeln!(s, "result: {}", if self.passed { "PASS" } else { "FAIL" }).unwrap();
        s
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
