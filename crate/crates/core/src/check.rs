//! Named residual checks, the common currency of every verification run.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    /// A quantity that should vanish.
    Residual(f64),
    /// An estimate compared against `reference` (or a sign condition).
    Value(f64),
}

impl Measure {
    pub fn get(&self) -> f64 {
        match *self {
            Measure::Residual(x) | Measure::Value(x) => x,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// Label of the identity or claim being checked.
    pub paper_ref: String,
    #[serde(flatten)]
    pub measure: Measure,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes iff `residual <= tolerance` (NaN fails).
    pub fn residual(name: impl Into<String>, label: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            paper_ref: label.into(),
            measure: Measure::Residual(residual),
            reference: None,
            tolerance,
            pass: residual <= tolerance,
        }
    }

    /// Passes iff `|value - reference| <= tolerance`.
    pub fn against(
        name: impl Into<String>,
        label: impl Into<String>,
        value: f64,
        reference: f64,
        tolerance: f64,
    ) -> Self {
        Check {
            name: name.into(),
            paper_ref: label.into(),
            measure: Measure::Value(value),
            reference: Some(reference),
            tolerance,
            pass: (value - reference).abs() <= tolerance,
        }
    }

    /// A value with an externally decided pass flag, e.g. a sign condition.
    pub fn condition(name: impl Into<String>, label: impl Into<String>, value: f64, tolerance: f64, pass: bool) -> Self {
        Check {
            name: name.into(),
            paper_ref: label.into(),
            measure: Measure::Value(value),
            reference: None,
            tolerance,
            pass,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct CheckReport {
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Measured value of the named check; panics if absent.
    pub fn value(&self, name: &str) -> f64 {
        self.get(name)
            .unwrap_or_else(|| panic!("no check named {name}"))
            .measure
            .get()
    }
}

/// Running maximum that propagates NaN instead of silently dropping it.
pub(crate) fn max_abs(acc: f64, x: f64) -> f64 {
    if x.is_nan() || acc.is_nan() {
        f64::NAN
    } else {
        acc.max(x.abs())
    }
}
