//! Verdicts, checks and the JSON/text report emitted by every harness.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    TooLarge,
    Skipped,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::TooLarge => "TOO LARGE",
            Verdict::Skipped => "SKIP",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Json>,
}

impl Check {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            verdict: Verdict::Pass,
            detail: detail.into(),
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>, witness: Json) -> Self {
        Check {
            name: name.into(),
            verdict: Verdict::Fail,
            detail: detail.into(),
            witness: Some(witness),
        }
    }

    pub fn skipped(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            verdict: Verdict::Skipped,
            detail: detail.into(),
            witness: None,
        }
    }

    /// A boolean outcome; failures carry `witness`.
    pub fn from_bool(name: impl Into<String>, ok: bool, detail: impl Into<String>, witness: Json) -> Self {
        if ok {
            Check::pass(name, detail)
        } else {
            Check::fail(name, detail, witness)
        }
    }

    /// Maps an error onto a verdict: caps become `TooLarge`, anything else `Fail`.
    pub fn from_error(name: impl Into<String>, err: &Error) -> Self {
        Check {
            name: name.into(),
            verdict: if err.is_too_large() {
                Verdict::TooLarge
            } else {
                Verdict::Fail
            },
            detail: err.to_string(),
            witness: Some(Json::String(err.to_string())),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Folds a list of checks into one, keeping the first failing witness.
pub fn summarize(name: impl Into<String>, checks: &[Check]) -> Check {
    let name = name.into();
    let failing = checks.iter().find(|c| c.verdict == Verdict::Fail);
    let too_large = checks.iter().find(|c| c.verdict == Verdict::TooLarge);
    let passed = checks.iter().filter(|c| c.passed()).count();
    let detail = format!("{passed}/{} sub-checks pass", checks.len());
    match (failing, too_large) {
        (Some(f), _) => Check {
            name,
            verdict: Verdict::Fail,
            detail: format!("{detail}; first failure: {}: {}", f.name, f.detail),
            witness: f.witness.clone(),
        },
        (None, Some(t)) => Check {
            name,
            verdict: Verdict::TooLarge,
            detail: format!("{detail}; {}: {}", t.name, t.detail),
            witness: t.witness.clone(),
        },
        (None, None) => Check::pass(name, detail),
    }
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_INVALID_INPUT: i32 = 3;
pub const EXIT_TOO_LARGE: i32 = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    /// Echo of the command and configuration that produced the report.
    pub command: Json,
    pub checks: Vec<Check>,
    #[serde(default)]
    pub data: Json,
    #[serde(default)]
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(command: Json) -> Self {
        Report {
            tool: "fincodensity".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command,
            checks: Vec::new(),
            data: Json::Null,
            elapsed_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks
            .iter()
            .all(|c| matches!(c.verdict, Verdict::Pass | Verdict::Skipped))
    }

    /// 0 pass, 2 some check failed, 4 only enumeration caps were hit.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.verdict == Verdict::Fail) {
            EXIT_CHECK_FAILED
        } else if self.checks.iter().any(|c| c.verdict == Verdict::TooLarge) {
            EXIT_TOO_LARGE
        } else {
            EXIT_PASS
        }
    }

    /// The verdict sequence, used to compare a re-run against a stored report.
    pub fn verdicts(&self) -> Vec<(String, Verdict)> {
        self.checks.iter().map(|c| (c.name.clone(), c.verdict)).collect()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let _ = write!(out, "{:<9} {:<width$}", c.verdict.label(), c.name);
            if !c.detail.is_empty() {
                let _ = write!(out, "  {}", c.detail);
            }
            out.push('\n');
            if c.verdict == Verdict::Fail {
                if let Some(w) = &c.witness {
                    let _ = writeln!(out, "          witness: {w}");
                }
            }
        }
        let pass = self.checks.iter().filter(|c| c.passed()).count();
        let _ = writeln!(out, "{pass}/{} checks pass ({} ms)", self.checks.len(), self.elapsed_ms);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let mut r = Report::new(Json::Null);
        r.checks.push(Check::pass("a", ""));
        assert_eq!(r.exit_code(), EXIT_PASS);
        r.checks.push(Check::from_error("b", &Error::too_large("x", 10, 5)));
        assert_eq!(r.exit_code(), EXIT_TOO_LARGE);
        r.checks.push(Check::fail("c", "bad", Json::Null));
        assert_eq!(r.exit_code(), EXIT_CHECK_FAILED);
    }

    #[test]
    fn report_round_trips() {
        let mut r = Report::new(serde_json::json!({"cmd": "x"}));
        r.checks
            .push(Check::fail("law", "broken", serde_json::json!({"object": 2})));
        r.checks.push(Check::skipped("big", "over cap"));
        let text = serde_json::to_string(&r).unwrap();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.verdicts(), r.verdicts());
    }

    #[test]
    fn summary_keeps_first_failure() {
        let checks = vec![
            Check::pass("a", ""),
            Check::fail("b", "first", Json::from(1)),
            Check::fail("c", "second", Json::from(2)),
        ];
        let s = summarize("all", &checks);
        assert_eq!(s.verdict, Verdict::Fail);
        assert_eq!(s.witness, Some(Json::from(1)));
    }
}
