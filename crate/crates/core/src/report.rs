//! Verification reports shared by every suite: a list of named checks with
//! pass/fail status and, on mismatch, both sides.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual: Option<String>,
}

impl Check {
    pub fn pass(label: impl Into<String>) -> Self {
        Check {
            label: label.into(),
            passed: true,
            expected: None,
            actual: None,
        }
    }

    /// Compares two displayable values, keeping both sides on mismatch.
    pub fn compare<T: PartialEq + ToString>(label: impl Into<String>, expected: &T, actual: &T) -> Self {
        let passed = expected == actual;
        Check {
            label: label.into(),
            passed,
            expected: (!passed).then(|| expected.to_string()),
            actual: (!passed).then(|| actual.to_string()),
        }
    }

    pub fn fail(label: impl Into<String>, expected: impl Into<String>, actual: impl Into<String>) -> Self {
        Check {
            label: label.into(),
            passed: false,
            expected: Some(expected.into()),
            actual: Some(actual.into()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Default)]
pub struct Report {
    pub suite: String,
    pub parameters: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report {
            suite: suite.into(),
            ..Report::default()
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compare_keeps_both_sides_on_mismatch() {
        let ok = Check::compare("same", &1, &1);
        assert!(ok.passed && ok.expected.is_none());
        let bad = Check::compare("differ", &2, &3);
        assert!(!bad.passed);
        assert_eq!(bad.expected.as_deref(), Some("2"));
        assert_eq!(bad.actual.as_deref(), Some("3"));
    }

    #[test]
    fn report_status() {
        let mut r = Report::new("demo").param("n", 3);
        r.push(Check::pass("a"));
        assert!(r.passed());
        r.push(Check::fail("b", "x", "y"));
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
        let j = r.to_json();
        assert_eq!(j["parameters"]["n"], "3");
    }
}
