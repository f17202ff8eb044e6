//! Pass/fail reports produced by every axiom checker.

use serde::Serialize;

use crate::exactla::Vector;

/// Outcome of a checked command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Error,
}

/// One violated identity: which identity, at which basis tuple, with what
/// residual (coordinates as rational strings).
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub identity: String,
    pub indices: Vec<usize>,
    pub residual: Vec<String>,
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Stats {
    /// Number of basis tuples evaluated.
    pub checked: usize,
}

/// Result of running a checker. `outcome == Pass` implies `details` is empty.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub subject: String,
    pub outcome: Outcome,
    pub details: Vec<Violation>,
    pub stats: Stats,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    /// First violation, if any; checkers push violations in tuple order.
    pub fn first_violation(&self) -> Option<&Violation> {
        self.details.first()
    }

    pub fn error(subject: impl Into<String>, message: impl Into<String>) -> Report {
        Report {
            subject: subject.into(),
            outcome: Outcome::Error,
            details: vec![Violation {
                identity: message.into(),
                indices: Vec::new(),
                residual: Vec::new(),
            }],
            stats: Stats::default(),
        }
    }
}

/// Accumulates residual checks into a [`Report`].
pub struct Checker {
    subject: String,
    details: Vec<Violation>,
    checked: usize,
}

impl Checker {
    pub fn new(subject: impl Into<String>) -> Self {
        Checker {
            subject: subject.into(),
            details: Vec::new(),
            checked: 0,
        }
    }

    /// Record one residual; zero residual passes, nonzero is a violation.
    pub fn residual(&mut self, identity: &str, indices: &[usize], residual: &Vector) {
        self.checked += 1;
        if !residual.is_zero() {
            self.details.push(Violation {
                identity: identity.to_string(),
                indices: indices.to_vec(),
                residual: residual.to_strings(),
            });
        }
    }

    pub fn has_failures(&self) -> bool {
        !self.details.is_empty()
    }

    pub fn finish(self) -> Report {
        let outcome = if self.details.is_empty() {
            Outcome::Pass
        } else {
            Outcome::Fail
        };
        Report {
            subject: self.subject,
            outcome,
            details: self.details,
            stats: Stats { checked: self.checked },
        }
    }
}
