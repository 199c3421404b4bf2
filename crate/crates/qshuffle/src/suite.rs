//! Check reporting shared by the library test suites and the CLI.

use std::time::Instant;

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub params: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub millis: u128,
}

impl CheckResult {
    pub fn summary(&self) -> String {
        let status = if self.pass { "pass" } else { "FAIL" };
        let mut s = format!("{status}  {}", self.name);
        if !self.params.is_empty() {
            s.push_str(&format!(" [{}]", self.params));
        }
        if let Some(w) = &self.witness {
            s.push_str(&format!("  witness: {w}"));
        }
        s
    }
}

/// Run a single identity check.  The closure returns Ok(None) on success,
/// Ok(Some(witness)) on an exact mismatch, and Err for setup failures.
pub fn run_check<F>(name: &str, params: &str, f: F) -> CheckResult
where
    F: FnOnce() -> crate::error::Result<Option<String>>,
{
    let start = Instant::now();
    let outcome = f();
    let millis = start.elapsed().as_millis();
    match outcome {
        Ok(None) => CheckResult {
            name: name.into(),
            params: params.into(),
            pass: true,
            witness: None,
            millis,
        },
        Ok(Some(w)) => CheckResult {
            name: name.into(),
            params: params.into(),
            pass: false,
            witness: Some(w),
            millis,
        },
        Err(e) => CheckResult {
            name: name.into(),
            params: params.into(),
            pass: false,
            witness: Some(format!("error: {e}")),
            millis,
        },
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub results: Vec<CheckResult>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn new(suite: &str, results: Vec<CheckResult>) -> Self {
        let pass = results.iter().all(|r| r.pass);
        SuiteReport {
            suite: suite.into(),
            results,
            pass,
        }
    }
}
