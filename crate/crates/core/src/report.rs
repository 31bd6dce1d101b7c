//! Reports produced by the exhaustive checks, and their CSV rendering.

use std::fmt;
use std::io::Write;

use crate::error::Result;
use crate::graph::{Morph, TruncatedKGraph};

const MAX_STORED: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: String,
    pub witness: Vec<String>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.axiom, self.witness.join(" "))
    }
}

/// Outcome of one check. `passed()` iff no violations were recorded.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub check: String,
    pub violations: Vec<Violation>,
    /// Violations beyond the stored cap.
    pub suppressed: usize,
    /// Number of individual instances examined.
    pub checked: usize,
    /// Informational lines: checked margin, boundary mismatches, flagged instances.
    pub notes: Vec<String>,
}

impl AxiomReport {
    pub fn new(check: impl Into<String>) -> Self {
        AxiomReport {
            check: check.into(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.suppressed == 0
    }

    pub fn fail(&mut self, axiom: &str, witness: Vec<String>) {
        if self.violations.len() < MAX_STORED {
            self.violations.push(Violation {
                axiom: axiom.to_string(),
                witness,
            });
        } else {
            self.suppressed += 1;
        }
    }

    /// Records an instance; fails with `witness()` when `ok` is false.
    pub fn expect(&mut self, ok: bool, axiom: &str, witness: impl FnOnce() -> Vec<String>) {
        self.checked += 1;
        if !ok {
            self.fail(axiom, witness());
        }
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    /// Folds another report's findings into this one.
    pub fn absorb(&mut self, other: AxiomReport) {
        self.checked += other.checked;
        self.suppressed += other.suppressed;
        for v in other.violations {
            self.fail(&v.axiom, v.witness);
        }
        self.notes.extend(other.notes);
    }

    /// First violation as a single line, for CSV and terminal output.
    pub fn first_witness(&self) -> String {
        self.violations
            .first()
            .map(|v| v.to_string())
            .unwrap_or_default()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {} ({} instances)", self.check, self.checked)?;
        for v in &self.violations {
            write!(f, "\n  witness {v}")?;
        }
        if self.suppressed > 0 {
            write!(f, "\n  ... {} more violations", self.suppressed)?;
        }
        Ok(())
    }
}

/// Short description of a morphism for witnesses: `label@degree`.
pub fn describe(g: &TruncatedKGraph, m: Morph) -> String {
    format!("{}@{}", g.label(m), g.degree(m))
}

/// One row of a check table: `check,instance,n,bound,passed,witness`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportRow {
    pub check: String,
    pub instance: String,
    pub n: String,
    pub bound: String,
    pub passed: bool,
    pub witness: String,
}

impl ReportRow {
    pub fn from_report(report: &AxiomReport, instance: &str, n: &str, bound: &str) -> Self {
        ReportRow {
            check: report.check.clone(),
            instance: instance.to_string(),
            n: n.to_string(),
            bound: bound.to_string(),
            passed: report.passed(),
            witness: report.first_witness(),
        }
    }
}

/// Quotes a CSV field when it contains a delimiter, quote or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub const CHECK_CSV_HEADER: &str = "check,instance,n,bound,passed,witness";

pub fn write_check_csv<W: Write>(out: &mut W, rows: &[ReportRow]) -> Result<()> {
    writeln!(out, "{CHECK_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            csv_field(&r.check),
            csv_field(&r.instance),
            csv_field(&r.n),
            csv_field(&r.bound),
            r.passed,
            csv_field(&r.witness)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passed_iff_no_violations() {
        let mut r = AxiomReport::new("x");
        r.expect(true, "a", Vec::new);
        assert!(r.passed());
        r.expect(false, "a", || vec!["w".into()]);
        assert!(!r.passed());
        assert_eq!(r.checked, 2);
        assert_eq!(r.first_witness(), "a: w");
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("(2,2)"), "\"(2,2)\"");
        assert_eq!(csv_field("plain"), "plain");
        let rows = vec![ReportRow {
            check: "delay".into(),
            instance: "loop".into(),
            n: "(3,)".into(),
            bound: "(3,)".into(),
            passed: true,
            witness: String::new(),
        }];
        let mut buf = Vec::new();
        write_check_csv(&mut buf, &rows).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "check,instance,n,bound,passed,witness\ndelay,loop,\"(3,)\",\"(3,)\",true,\n"
        );
    }
}
