//! Verification reports shared by the library suites and the CLI.

use std::fmt;

use num_rational::BigRational;
use serde::{Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        })
    }
}

/// Outcome of one named identity (an axiom, a generator check, ...).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub id: String,
    pub status: Status,
    /// Number of instances evaluated.
    pub checked: usize,
    /// Number of instances that failed.
    pub failures: usize,
    /// Rendered monomials of the first failing instance.
    pub witnesses: Vec<String>,
    /// Trial index of the first failure, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<usize>,
}

impl CheckOutcome {
    pub fn new(id: impl Into<String>) -> Self {
        CheckOutcome {
            id: id.into(),
            status: Status::Pass,
            checked: 0,
            failures: 0,
            witnesses: Vec::new(),
            first_failure: None,
        }
    }

    /// Records one instance; `witness` is consulted only for the first failure.
    pub fn record(&mut self, trial: usize, ok: bool, witness: impl FnOnce() -> Vec<String>) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(trial);
                self.witnesses = witness();
            }
            self.status = Status::Fail;
        }
    }

    /// Folds a per-trial outcome for the same identity into this one.
    pub fn merge(&mut self, other: CheckOutcome) {
        self.checked += other.checked;
        self.failures += other.failures;
        if self.first_failure.is_none() && other.first_failure.is_some() {
            self.first_failure = other.first_failure;
            self.witnesses = other.witnesses;
        }
        if other.status == Status::Fail {
            self.status = Status::Fail;
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub check: String,
    pub status: Status,
    pub witnesses: Vec<String>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub items: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    /// Overall status is PASS iff every item passed; top-level witnesses are
    /// those of the first failing item.
    pub fn from_items(check: impl Into<String>, items: Vec<CheckOutcome>, seed: Option<u64>, trials: Option<usize>) -> Self {
        let first_fail = items.iter().find(|i| !i.passed());
        Report {
            check: check.into(),
            status: Status::from_bool(first_fail.is_none()),
            witnesses: first_fail.map(|i| i.witnesses.clone()).unwrap_or_default(),
            seed,
            trials,
            items,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn item(&self, id: &str) -> Option<&CheckOutcome> {
        self.items.iter().find(|i| i.id == id)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.check, self.status)?;
        if let (Some(seed), Some(trials)) = (self.seed, self.trials) {
            writeln!(f, "  seed {seed}, trials {trials}")?;
        }
        for item in &self.items {
            writeln!(f, "  [{}] {} ({} checked, {} failed)", item.status, item.id, item.checked, item.failures)?;
            if let Some(t) = item.first_failure {
                writeln!(f, "    first failure at trial {t}")?;
            }
            for w in &item.witnesses {
                writeln!(f, "    witness: {w}")?;
            }
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

pub(crate) fn ser_rational<S: Serializer>(c: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&c.to_string())
}
