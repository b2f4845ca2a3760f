use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::scenario::Scenario;
use crate::HarnessError;

pub const SCHEMA: &str = "qtau-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub residual_terms: usize,
    pub witness: Option<String>,
    pub runtime_ms: u64,
    /// Measured facts that are reported but not gated on.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub scenario: Scenario,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl Report {
    pub fn new(scenario: Scenario, checks: Vec<CheckRecord>) -> Self {
        let mut summary = Summary::default();
        for c in &checks {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Error => summary.error += 1,
            }
        }
        Report { schema: SCHEMA.to_string(), scenario, checks, summary }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0 && self.summary.error == 0
    }

    /// `0` when every check passed, `1` otherwise.
    pub fn exit_code(&self) -> u8 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    /// The same report with every runtime set to zero.
    pub fn without_runtime(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.runtime_ms = 0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }

    pub fn to_text(&self) -> String {
        let s = &self.scenario;
        let mut out = String::new();
        let levels = if s.levels.is_empty() { "all".to_string() } else { format!("{:?}", s.levels) };
        let _ = writeln!(out, "{} suite, N = {}, levels {levels}, seed {}", s.suite.name(), s.n, s.seed);
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS ",
                Status::Fail => "FAIL ",
                Status::Error => "ERROR",
            };
            let _ = writeln!(out, "  {tag} {:<16} {:>6} ms", c.name, c.runtime_ms);
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "        {} residual terms, first: {w}", c.residual_terms);
            }
            for n in &c.notes {
                let _ = writeln!(out, "        note: {n}");
            }
        }
        let _ = writeln!(out, "pass {}, fail {}, error {}", self.summary.pass, self.summary.fail, self.summary.error);
        out
    }
}

pub fn emit_report(report: &Report, format: Format, path: &Path) -> Result<(), HarnessError> {
    let body = match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    std::fs::write(path, body)
        .map_err(|e| HarnessError::Io { path: path.display().to_string(), message: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{Scenario, Suite};

    fn record(name: &str, terms: usize) -> CheckRecord {
        CheckRecord {
            name: name.into(),
            status: if terms == 0 { Status::Pass } else { Status::Fail },
            residual_terms: terms,
            witness: (terms > 0).then(|| "x1".to_string()),
            runtime_ms: 3,
            notes: Vec::new(),
        }
    }

    #[test]
    fn pass_only_exits_zero() {
        let r = Report::new(Scenario::new(Suite::Quantum, 2), vec![record("tau1", 0)]);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn failing_check_exits_one_with_witness() {
        let r = Report::new(Scenario::new(Suite::Quantum, 2), vec![record("tau1", 0), record("detq", 2)]);
        assert_eq!(r.exit_code(), 1);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema"], "qtau-report/1");
        assert_eq!(v["checks"][1]["status"], "fail");
        assert_eq!(v["checks"][1]["witness"], "x1");
        assert_eq!(v["checks"][0]["witness"], serde_json::Value::Null);
        assert_eq!(v["summary"]["fail"], 1);
        assert_eq!(v["scenario"]["N"], 2);
    }

    #[test]
    fn bad_path_is_an_io_error() {
        let r = Report::new(Scenario::new(Suite::Quantum, 2), vec![]);
        let err = emit_report(&r, Format::Json, Path::new("/nonexistent/dir/report.json")).unwrap_err();
        assert!(matches!(err, HarnessError::Io { .. }));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn json_round_trips() {
        let r = Report::new(Scenario::new(Suite::Classical, 3), vec![record("hirota", 0)]);
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
