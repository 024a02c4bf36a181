//! Verification report: an ordered list of named checks with exact
//! residuals. Output is deterministic: checks are sorted by id and
//! expression printing is canonical.

use crate::symexpr::Expr;
use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "N/A")]
    NotApplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => write!(f, "PASS"),
            Status::Fail => write!(f, "FAIL"),
            Status::NotApplicable => write!(f, "N/A"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub id: String,
    pub status: Status,
    /// Canonical string of the first nonzero residual, or "0".
    pub residual: String,
    #[serde(rename = "ref")]
    pub reference: String,
    /// Extra per-component lines (e.g. soliton residuals by frame pair).
    pub details: Vec<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckLine>,
}

impl VerificationReport {
    pub fn new() -> Self {
        VerificationReport { checks: Vec::new() }
    }

    /// One check decided by a list of residual expressions: PASS iff every
    /// residual is canonically zero.
    pub fn push_residuals(&mut self, id: &str, reference: &str, residuals: &[Expr]) {
        let worst = residuals.iter().find(|r| !r.is_zero());
        let (status, residual) = match worst {
            None => (Status::Pass, "0".to_string()),
            Some(r) => (Status::Fail, r.to_string()),
        };
        self.checks.push(CheckLine {
            id: id.to_string(),
            status,
            residual,
            reference: reference.to_string(),
            details: Vec::new(),
        });
    }

    pub fn push_line(&mut self, line: CheckLine) {
        self.checks.push(line);
    }

    pub fn push_na(&mut self, id: &str, reference: &str) {
        self.checks.push(CheckLine {
            id: id.to_string(),
            status: Status::NotApplicable,
            residual: "0".to_string(),
            reference: reference.to_string(),
            details: Vec::new(),
        });
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    /// Deterministic ordering: sort by id (ids are chosen to sort in
    /// logical order).
    pub fn sorted(mut self) -> Self {
        self.checks.sort_by(|a, b| a.id.cmp(&b.id));
        self
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn find(&self, id: &str) -> Option<&CheckLine> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Grep-able text format: one CHECK line per check, followed by
    /// indented detail lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "CHECK {} {} residual={} ref=\"{}\"\n",
                c.id, c.status, c.residual, c.reference
            ));
            for d in &c.details {
                out.push_str(&format!("  {d}\n"));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::Symbols;

    #[test]
    fn pass_fail_and_text_format() {
        let syms = Symbols::new(&["x", "y"], &["lambda"]);
        let mut rep = VerificationReport::new();
        let l = Expr::symbol(&syms, "lambda").unwrap();
        rep.push_residuals("b-check", "x = x", &[Expr::zero(&syms)]);
        rep.push_residuals("a-check", "lambda = 7", &[l.sub(&Expr::int(&syms, 7))]);
        rep.push_na("c-check", "optional");
        let rep = rep.sorted();
        assert!(!rep.all_pass());
        assert_eq!(rep.find("a-check").unwrap().residual, "lambda - 7");
        let text = rep.to_text();
        let expected = "CHECK a-check FAIL residual=lambda - 7 ref=\"lambda = 7\"\n\
                        CHECK b-check PASS residual=0 ref=\"x = x\"\n\
                        CHECK c-check N/A residual=0 ref=\"optional\"\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn json_contains_renamed_fields() {
        let syms = Symbols::new(&["x", "y"], &[]);
        let mut rep = VerificationReport::new();
        rep.push_residuals("only", "anchor", &[Expr::zero(&syms)]);
        let json = rep.to_json();
        assert!(json.contains("\"ref\": \"anchor\""));
        assert!(json.contains("\"status\": \"PASS\""));
    }

    #[test]
    fn na_does_not_fail_but_details_print_indented() {
        let mut rep = VerificationReport::new();
        rep.push_line(CheckLine {
            id: "x".into(),
            status: Status::NotApplicable,
            residual: "0".into(),
            reference: "r".into(),
            details: vec!["note".into()],
        });
        assert!(rep.all_pass());
        assert!(rep.to_text().contains("\n  note\n"));
    }
}
