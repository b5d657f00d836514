//! Pass/fail records produced by the relation checkers.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub label: String,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub results: Vec<CheckResult>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report { name: name.into(), results: Vec::new() }
    }

    pub fn push(&mut self, label: impl Into<String>, passed: bool, witness: Option<String>) {
        self.results.push(CheckResult { label: label.into(), passed, witness });
    }

    pub fn extend(&mut self, other: Report) {
        self.results.extend(other.results);
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| !r.passed)
    }

    pub fn witnesses(&self) -> Vec<String> {
        self.failures()
            .map(|r| match &r.witness {
                Some(w) => format!("{}: {}", r.label, w),
                None => r.label.clone(),
            })
            .collect()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.name, if self.passed() { "pass" } else { "FAIL" })?;
        for r in &self.results {
            write!(f, "  [{}] {}", if r.passed { "ok" } else { "FAIL" }, r.label)?;
            if let Some(w) = &r.witness {
                write!(f, "  ({w})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
