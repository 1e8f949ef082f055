//! Violation reports shared by instance validation and LP feasibility checks.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// One violated invariant or constraint, tied to the entity it concerns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Issue {
    pub severity: Severity,
    /// Short machine-friendly tag, e.g. `rate-sum` or `driver-capacity`.
    pub kind: String,
    /// Id of the driver, request type or edge involved (empty for global issues).
    pub entity: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn error(&mut self, kind: &str, entity: impl Into<String>, message: impl Into<String>) {
        self.issues.push(Issue {
            severity: Severity::Error,
            kind: kind.into(),
            entity: entity.into(),
            message: message.into(),
        });
    }

    pub fn warning(&mut self, kind: &str, entity: impl Into<String>, message: impl Into<String>) {
        self.issues.push(Issue {
            severity: Severity::Warning,
            kind: kind.into(),
            entity: entity.into(),
            message: message.into(),
        });
    }

    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    /// True when no issue has [`Severity::Error`]; warnings are allowed.
    pub fn is_valid(&self) -> bool {
        self.errors().next().is_none()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Issue> {
        self.issues
            .iter()
            .filter(|i| i.severity == Severity::Warning)
    }

    pub fn has_kind(&self, kind: &str) -> bool {
        self.issues.iter().any(|i| i.kind == kind)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return f.write_str("no issues");
        }
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            let sev = match issue.severity {
                Severity::Error => "error",
                Severity::Warning => "warning",
            };
            if issue.entity.is_empty() {
                write!(f, "{sev} [{}]: {}", issue.kind, issue.message)?;
            } else {
                write!(
                    f,
                    "{sev} [{}] {}: {}",
                    issue.kind, issue.entity, issue.message
                )?;
            }
        }
        Ok(())
    }
}
