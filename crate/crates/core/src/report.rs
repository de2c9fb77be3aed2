//! Pass/fail records shared by every verification routine.

use std::fmt;

use crate::coalgebra::{PairSum, Word, WordSum};
use crate::graded::Element;

/// What was left over where an identity should have vanished.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Residual {
    Element(Element),
    Words(WordSum),
    Pairs(PairSum),
    Note(String),
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residual::Element(e) => write!(f, "{e:?}"),
            Residual::Words(w) => write!(f, "{w:?}"),
            Residual::Pairs(p) => write!(f, "{p:?}"),
            Residual::Note(s) => f.write_str(s),
        }
    }
}

/// One failing input (a basis word or tuple) and its residual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub word: Word,
    pub residual: Residual,
}

/// Outcome of checking one identity on many inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<Failure>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            checked: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Records one evaluated input; a nonzero residual is a failure.
    pub fn record_element(&mut self, word: &[usize], residual: Element) {
        self.checked += 1;
        if !residual.is_zero() {
            self.failures.push(Failure {
                word: word.to_vec(),
                residual: Residual::Element(residual),
            });
        }
    }

    pub fn record_words(&mut self, word: &[usize], residual: WordSum) {
        self.checked += 1;
        if !residual.is_zero() {
            self.failures.push(Failure {
                word: word.to_vec(),
                residual: Residual::Words(residual),
            });
        }
    }

    pub fn record_pairs(&mut self, word: &[usize], residual: PairSum) {
        self.checked += 1;
        if !residual.is_zero() {
            self.failures.push(Failure {
                word: word.to_vec(),
                residual: Residual::Pairs(residual),
            });
        }
    }

    pub fn record_failure(&mut self, word: &[usize], note: impl Into<String>) {
        self.checked += 1;
        self.failures.push(Failure {
            word: word.to_vec(),
            residual: Residual::Note(note.into()),
        });
    }

    pub fn first_failure(&self) -> Option<&Failure> {
        self.failures.first()
    }

    /// Merges another report's counts and failures into this one.
    pub fn absorb(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }
}
