use serde::{Deserialize, Serialize};

/// Outcome of one verification check.
///
/// `passed` is always `observed_error <= tolerance`; construct through
/// [`CheckReport::new`] to keep it that way.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub observed_error: f64,
    pub tolerance: f64,
    pub details: String,
}

impl CheckReport {
    pub fn new(
        name: impl Into<String>,
        observed_error: f64,
        tolerance: f64,
        details: impl Into<String>,
    ) -> Self {
        // NaN would compare false and JSON cannot carry non-finite numbers
        let observed_error = if observed_error.is_finite() {
            observed_error
        } else {
            f64::MAX
        };
        Self {
            name: name.into(),
            passed: observed_error <= tolerance,
            observed_error,
            tolerance,
            details: details.into(),
        }
    }

    /// A check that could not be evaluated. The error is recorded as
    /// `f64::MAX` so the report stays serializable.
    pub fn failed(name: impl Into<String>, tolerance: f64, details: impl Into<String>) -> Self {
        Self::new(name, f64::MAX, tolerance, details)
    }
}

pub fn all_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.passed)
}
