use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedValue {
    pub name: String,
    pub value: String,
}

/// A yes/no finding that is not itself a pass/fail check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Verdict {
    pub subject: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default)]
    pub checks: Vec<Check>,
    #[serde(default)]
    pub values: Vec<NamedValue>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<Verdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            status: Status::Ok,
            error: None,
            checks: Vec::new(),
            values: Vec::new(),
            verdicts: Vec::new(),
            outputs: Vec::new(),
        }
    }

    /// Report for input that could not be read or parsed.
    pub fn failed(command: &str, error: String) -> Self {
        Self { status: Status::Error, error: Some(error), ..Self::new(command) }
    }

    pub fn check(&mut self, name: impl Into<String>, witness: Option<String>) {
        if witness.is_some() {
            self.status = Status::Error;
        }
        self.checks.push(Check { name: name.into(), pass: witness.is_none(), witness });
    }

    pub fn value(&mut self, name: impl Into<String>, value: String) {
        self.values.push(NamedValue { name: name.into(), value });
    }

    pub fn verdict(&mut self, subject: impl Into<String>, holds: bool) {
        self.verdicts.push(Verdict { subject: subject.into(), holds });
    }

    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let status = if self.is_ok() { "ok" } else { "error" };
        let _ = writeln!(out, "{}: {status}", self.command);
        if let Some(error) = &self.error {
            let _ = writeln!(out, "  {error}");
        }
        for check in &self.checks {
            let mark = if check.pass { "pass" } else { "FAIL" };
            let _ = write!(out, "  [{mark}] {}", check.name);
            if let Some(witness) = &check.witness {
                let _ = write!(out, ": {witness}");
            }
            out.push('\n');
        }
        for verdict in &self.verdicts {
            let _ = writeln!(out, "  {} = {}", verdict.subject, verdict.holds);
        }
        for value in &self.values {
            let _ = writeln!(out, "  {} = {}", value.name, value.value);
        }
        for path in &self.outputs {
            let _ = writeln!(out, "  wrote {path}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_round_trip_through_json() {
        let mut report = Report::new("indep");
        report.check("s1", None);
        report.check("s3", Some("(a, a') at b".into()));
        report.value("p(a, b)", "3/25".into());
        report.verdict("a independent of b", true);
        report.outputs.push("out.json".into());
        let json = serde_json::to_string_pretty(&report).unwrap();
        assert_eq!(serde_json::from_str::<Report>(&json).unwrap(), report);
        assert_eq!(report.status, Status::Error);

        let failed = Report::failed("validate", "no such file".into());
        let json = serde_json::to_string(&failed).unwrap();
        assert_eq!(serde_json::from_str::<Report>(&json).unwrap(), failed);
    }
}
