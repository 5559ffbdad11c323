//! Verification reports shared by every checker.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A complex number serialized as `{"re":..,"im":..}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

impl From<f64> for ComplexValue {
    fn from(x: f64) -> Self {
        ComplexValue { re: x, im: 0.0 }
    }
}

impl From<ComplexValue> for Complex64 {
    fn from(z: ComplexValue) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// Outcome of a hypothesis test that gates a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    /// Hypothesis checked and satisfied; the string names which one.
    Holds(String),
    /// Hypothesis checked and not satisfied; no verdict is issued.
    Unmet(String),
    /// The check has no hypothesis beyond well-formed input.
    None,
}

/// Result of one verification. `pass` is `None` when a hypothesis is unmet.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub statement: String,
    pub hypothesis: Hypothesis,
    pub lhs: Option<ComplexValue>,
    pub rhs: Option<ComplexValue>,
    pub residual: f64,
    pub tol: f64,
    pub pass: Option<bool>,
    pub scheme: Option<String>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub details: BTreeMap<String, serde_json::Value>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(check: &str, statement: &str) -> Self {
        VerificationReport {
            check: check.into(),
            statement: statement.into(),
            hypothesis: Hypothesis::None,
            lhs: None,
            rhs: None,
            residual: 0.0,
            tol: 0.0,
            pass: None,
            scheme: None,
            seed: None,
            details: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    /// Sets `lhs`, `rhs`, the residual `|lhs - rhs|`, and the verdict.
    pub fn compare(mut self, lhs: Complex64, rhs: Complex64, tol: f64) -> Self {
        self.lhs = Some(lhs.into());
        self.rhs = Some(rhs.into());
        self.residual = (lhs - rhs).norm();
        self.tol = tol;
        self.pass = Some(self.residual <= tol);
        self
    }

    pub fn with_detail(mut self, key: &str, value: impl Serialize) -> Self {
        self.details.insert(
            key.into(),
            serde_json::to_value(value).unwrap_or(serde_json::Value::Null),
        );
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.pass == Some(true)
    }

    /// One-line human-readable summary.
    pub fn summary(&self) -> String {
        let verdict = match self.pass {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "NO VERDICT",
        };
        format!(
            "[{verdict}] {} ({}): residual {:.3e} tol {:.1e}",
            self.check, self.statement, self.residual, self.tol
        )
    }
}
