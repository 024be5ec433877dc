//! Violation reports for structure checks.
//!
//! Check functions never stop at the first failure; they enumerate every
//! violated identity instance so a report is directly actionable. Basis
//! indices in reports are 1-based, matching the e_1, e_2, ... naming used
//! in input files.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Scalar;

/// One failed identity instance on a basis tuple.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation {
    pub identity: String,
    /// 1-based basis indices the identity was instantiated at.
    pub tuple: Vec<usize>,
    pub lhs: Vec<Scalar>,
    pub rhs: Vec<Scalar>,
}

impl Violation {
    /// `tuple` here is 0-based (loop indices); stored 1-based.
    pub fn new(identity: &str, tuple: &[usize], lhs: Vec<Scalar>, rhs: Vec<Scalar>) -> Violation {
        Violation {
            identity: identity.to_string(),
            tuple: tuple.iter().map(|i| i + 1).collect(),
            lhs,
            rhs,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tuple = self
            .tuple
            .iter()
            .map(|i| format!("e{i}"))
            .collect::<Vec<_>>()
            .join(", ");
        let side = |v: &[Scalar]| {
            let body = v
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            format!("({body})")
        };
        write!(
            f,
            "{} fails at ({tuple}): lhs = {}, rhs = {}",
            self.identity,
            side(&self.lhs),
            side(&self.rhs)
        )
    }
}

/// Outcome of a structure check: empty means every identity held.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Report {
    pub subject: String,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new(subject: &str) -> Report {
        Report {
            subject: subject.to_string(),
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    /// Record a violation unless both sides agree.
    pub fn check(&mut self, identity: &str, tuple: &[usize], lhs: Vec<Scalar>, rhs: Vec<Scalar>) {
        if lhs != rhs {
            self.push(Violation::new(identity, tuple, lhs, rhs));
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.violations.extend(other.violations);
    }

    /// Convert to a Result, mapping a failing report through `to_error`.
    pub fn into_result(self, to_error: impl FnOnce(String) -> Error) -> Result<()> {
        if self.passed() {
            Ok(())
        } else {
            Err(to_error(self.summary()))
        }
    }

    pub fn summary(&self) -> String {
        if self.passed() {
            format!("{}: all identities hold", self.subject)
        } else {
            let first = &self.violations[0];
            format!(
                "{}: {} violation(s), first: {}",
                self.subject,
                self.violations.len(),
                first
            )
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "{}: pass", self.subject);
        }
        writeln!(
            f,
            "{}: {} violation(s)",
            self.subject,
            self.violations.len()
        )?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}
