//! Structured pass/fail records shared by every checker.
//!
//! Reports are plain data with a fixed field order, so serializing the same
//! report twice gives identical bytes. Witness indices are 1-based to match
//! the frame labels `e_1 .. e_n`.

use serde::Serialize;

use crate::exact::{Rational, Tensor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Holds on the input but is not a general consequence of the axioms.
    Conditional,
    Skipped,
}

/// What a failing check means.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    /// Computed from first principles; a failure means the input does not
    /// have the property (or the engine is wrong).
    Consistency,
    /// Comparison against a closed-form formula or printed table value that
    /// is under audit. A failure is a recorded discrepancy, not an error.
    Reference,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Witness {
    pub index: Vec<usize>,
    pub expected: String,
    pub actual: String,
}

impl Witness {
    /// Takes a 0-based index and stores it 1-based.
    pub fn at(index: &[usize], expected: &Rational, actual: &Rational) -> Self {
        Witness {
            index: index.iter().map(|i| i + 1).collect(),
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }

    pub fn message(index: &[usize], expected: impl Into<String>, actual: impl Into<String>) -> Self {
        Witness {
            index: index.iter().map(|i| i + 1).collect(),
            expected: expected.into(),
            actual: actual.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub kind: CheckKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub witnesses: Vec<Witness>,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, kind: CheckKind) -> Self {
        Check {
            name: name.into(),
            status,
            kind,
            note: None,
            witnesses: Vec::new(),
        }
    }

    pub fn pass(name: impl Into<String>) -> Self {
        Check::new(name, Status::Pass, CheckKind::Consistency)
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Check::new(name, Status::Skipped, CheckKind::Consistency).with_note(reason)
    }

    /// Pass iff no witnesses were collected.
    pub fn from_witnesses(name: impl Into<String>, kind: CheckKind, witnesses: Vec<Witness>) -> Self {
        let status = if witnesses.is_empty() { Status::Pass } else { Status::Fail };
        let mut check = Check::new(name, status, kind);
        check.witnesses = witnesses;
        check.witnesses.sort();
        check
    }

    /// Componentwise comparison of two tensors of the same shape. On failure
    /// every differing component is a witness, so the witness list is the
    /// exact discrepancy.
    pub fn compare_tensors(name: impl Into<String>, kind: CheckKind, expected: &Tensor, actual: &Tensor) -> Self {
        let name = name.into();
        if !expected.same_shape(actual) {
            let mut check = Check::new(name, Status::Fail, kind);
            check.witnesses.push(Witness::message(
                &[],
                format!("shape {:?} dim {}", expected.variance(), expected.dim()),
                format!("shape {:?} dim {}", actual.variance(), actual.dim()),
            ));
            return check;
        }
        let witnesses = expected
            .differences(actual)
            .into_iter()
            .map(|(ix, e, a)| Witness::at(&ix, e, a))
            .collect();
        Check::from_witnesses(name, kind, witnesses)
    }

    pub fn compare_scalars(name: impl Into<String>, kind: CheckKind, expected: &Rational, actual: &Rational) -> Self {
        let witnesses = if expected == actual {
            Vec::new()
        } else {
            vec![Witness::at(&[], expected, actual)]
        };
        Check::from_witnesses(name, kind, witnesses)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Downgrade a pass to conditional; failures stay failures.
    pub fn conditional(mut self) -> Self {
        if self.status == Status::Pass {
            self.status = Status::Conditional;
        }
        self
    }

    pub fn reference(mut self) -> Self {
        self.kind = CheckKind::Reference;
        self
    }

    pub fn is_failure(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum Parameters {
    Point { a: Rational, b: Rational },
    Grid { description: String, points: Vec<[Rational; 2]> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub subject: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameters: Option<Parameters>,
    pub checks: Vec<Check>,
}

impl AuditReport {
    pub fn new(subject: impl Into<String>) -> Self {
        AuditReport {
            subject: subject.into(),
            parameters: None,
            checks: Vec::new(),
        }
    }

    pub fn with_parameters(mut self, parameters: Parameters) -> Self {
        self.parameters = Some(parameters);
        self
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Append another report's checks, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: AuditReport) {
        for mut check in other.checks {
            check.name = format!("{prefix} {}", check.name);
            self.checks.push(check);
        }
    }

    /// Sort checks by name. Called once before emission.
    pub fn finalize(mut self) -> Self {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        self
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// No consistency check failed. Reference discrepancies do not count.
    pub fn is_consistent(&self) -> bool {
        !self
            .checks
            .iter()
            .any(|c| c.is_failure() && c.kind == CheckKind::Consistency)
    }

    /// No check of any kind failed.
    pub fn all_pass(&self) -> bool {
        !self.checks.iter().any(Check::is_failure)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.is_failure())
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }
}
