use serde::{Deserialize, Serialize};

use crate::algebra::OperatorExpr;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub id: String,
    pub lhs: String,
    pub expected: String,
    pub residual: String,
    pub pass: bool,
    /// Recorded entries are reported but never counted as failures.
    pub asserted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric_residual: Option<f64>,
}

impl ReportEntry {
    /// Symbolic check: passes iff `lhs − expected` normalizes to zero.
    pub fn symbolic(id: impl Into<String>, label: impl Into<String>, lhs: &OperatorExpr, expected: &OperatorExpr) -> Self {
        let residual = lhs.sub(expected);
        ReportEntry {
            id: id.into(),
            lhs: label.into(),
            expected: expected.to_string(),
            residual: residual.to_string(),
            pass: residual.is_zero(),
            asserted: true,
            numeric_residual: None,
        }
    }

    /// Symbolic check that `value` is nonzero.
    pub fn nonzero(id: impl Into<String>, label: impl Into<String>, value: &OperatorExpr) -> Self {
        ReportEntry {
            id: id.into(),
            lhs: label.into(),
            expected: "nonzero".into(),
            residual: value.to_string(),
            pass: !value.is_zero(),
            asserted: true,
            numeric_residual: None,
        }
    }

    /// Numeric check: passes iff `value ≤ tol`.
    pub fn numeric(id: impl Into<String>, label: impl Into<String>, value: f64, tol: f64) -> Self {
        ReportEntry {
            id: id.into(),
            lhs: label.into(),
            expected: format!("<= {tol:e}"),
            residual: format!("{value:e}"),
            pass: value <= tol,
            asserted: true,
            numeric_residual: Some(value),
        }
    }

    /// Numeric check with a free-form pass criterion.
    pub fn numeric_with(
        id: impl Into<String>,
        label: impl Into<String>,
        expected: impl Into<String>,
        value: f64,
        pass: bool,
    ) -> Self {
        ReportEntry {
            id: id.into(),
            lhs: label.into(),
            expected: expected.into(),
            residual: format!("{value:e}"),
            pass,
            asserted: true,
            numeric_residual: Some(value),
        }
    }

    pub fn recorded(mut self) -> Self {
        self.asserted = false;
        self
    }

    pub fn fails(&self) -> bool {
        self.asserted && !self.pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub entries: Vec<ReportEntry>,
    /// Asserted entries that pass.
    pub passed: usize,
    /// Asserted entries that fail.
    pub failed: usize,
    /// Entries recorded without being asserted.
    pub recorded: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, entries: Vec<ReportEntry>) -> Self {
        let mut r = VerificationReport {
            suite: suite.into(),
            entries,
            passed: 0,
            failed: 0,
            recorded: 0,
            warnings: Vec::new(),
        };
        r.recount();
        r
    }

    pub fn recount(&mut self) {
        self.passed = self.entries.iter().filter(|e| e.asserted && e.pass).count();
        self.failed = self.entries.iter().filter(|e| e.fails()).count();
        self.recorded = self.entries.iter().filter(|e| !e.asserted).count();
    }

    pub fn push(&mut self, e: ReportEntry) {
        self.entries.push(e);
        self.recount();
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.entries.extend(other.entries);
        self.warnings.extend(other.warnings);
        self.recount();
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn entry(&self, id: &str) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| e.fails())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
