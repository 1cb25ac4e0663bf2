use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

/// One named check. `pass` is exactly `residual <= tol`; a NaN residual fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            tol,
            pass: residual <= tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub subject: String,
    pub checks: Vec<Check>,
    pub elapsed_ms: f64,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        VerificationReport {
            subject: subject.into(),
            checks: Vec::new(),
            elapsed_ms: 0.0,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, residual: f64, tol: f64) -> &mut Self {
        self.checks.push(Check::new(name, residual, tol));
        self
    }

    /// Boolean condition recorded as residual 0 (holds) or 1 (fails) against tolerance 0.
    pub fn flag(&mut self, name: impl Into<String>, holds: bool) -> &mut Self {
        self.check(name, if holds { 0.0 } else { 1.0 }, 0.0)
    }

    /// Appends the checks of `other`, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: VerificationReport) -> &mut Self {
        for mut c in other.checks {
            if !prefix.is_empty() {
                c.name = format!("{prefix}.{}", c.name);
            }
            self.checks.push(c);
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().fold(0.0, |m, c| m.max(c.residual))
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
        self
    }

    /// Human-readable rendering; residuals in scientific notation, 3 significant digits.
    pub fn to_text(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.subject);
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  {}  {:<width$}  residual {:>10.2e}  tol {:.2e}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.residual,
                c.tol,
            );
        }
        let _ = writeln!(
            out,
            "  => {} ({} checks, {:.2} ms)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.elapsed_ms
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_residual_within_tol() {
        let mut r = VerificationReport::new("x");
        r.check("a", 1e-10, 1e-9).check("b", 1e-9, 1e-9);
        assert!(r.passed());
        r.check("c", f64::NAN, 1.0);
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn json_schema_fields() {
        let mut r = VerificationReport::new("s");
        r.flag("f", true);
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["subject"], "s");
        assert_eq!(v["checks"][0]["name"], "f");
        assert_eq!(v["checks"][0]["pass"], true);
        assert!(v["elapsed_ms"].is_number());
        assert_eq!(v.as_object().unwrap().len(), 3);
    }

    #[test]
    fn text_uses_scientific_residuals() {
        let mut r = VerificationReport::new("s");
        r.check("a", 0.000123456, 1e-9);
        let t = r.to_text();
        assert!(t.contains("1.23e-4"), "{t}");
        assert!(t.contains("FAIL"));
    }
}
