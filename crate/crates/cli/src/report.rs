//! Check records and their text and JSON renderings. Nothing here depends
//! on time or on hash order, so equal inputs give byte-identical reports.

use std::fmt::Write as _;

use leibniz_core::coalgebra::Word;
use leibniz_core::graded::GradedSpace;
use leibniz_core::report::{CheckReport, Residual};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Skipped,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::Skipped => "SKIPPED",
        }
    }
}

/// One check: what was checked, the identity it checks, and the first
/// failing input if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Record {
    pub suite: String,
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub checked: usize,
    pub witness: Option<String>,
}

impl Record {
    pub fn new(suite: &str, name: impl Into<String>, anchor: &str, status: Status) -> Self {
        Self {
            suite: suite.to_string(),
            name: name.into(),
            anchor: anchor.to_string(),
            status,
            checked: 0,
            witness: None,
        }
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }

    pub fn with_checked(mut self, checked: usize) -> Self {
        self.checked = checked;
        self
    }

    pub fn pass_if(suite: &str, name: impl Into<String>, anchor: &str, ok: bool) -> Self {
        Self::new(suite, name, anchor, if ok { Status::Pass } else { Status::Fail })
    }

    /// A record for a [`CheckReport`]: failing words are named in `words`,
    /// residual values in `values`.
    pub fn from_check(suite: &str, anchor: &str, rep: &CheckReport, words: &GradedSpace, values: &GradedSpace) -> Self {
        let mut r = Self::pass_if(suite, rep.name.clone(), anchor, rep.passed()).with_checked(rep.checked);
        if let Some(f) = rep.first_failure() {
            let mut w = format!("{} -> {}", word_names(&f.word, words), residual_text(&f.residual, values));
            if rep.failures.len() > 1 {
                let _ = write!(w, " (and {} more)", rep.failures.len() - 1);
            }
            r.witness = Some(w);
        }
        r
    }

    pub fn error(suite: &str, name: impl Into<String>, anchor: &str, err: impl std::fmt::Display) -> Self {
        Self::new(suite, name, anchor, Status::Fail).with_witness(format!("error: {err}"))
    }
}

pub fn word_names(w: &Word, space: &GradedSpace) -> String {
    let names: Vec<&str> = w
        .iter()
        .map(|&i| if i < space.dim() { space.name(i) } else { "?" })
        .collect();
    format!("({})", names.join(" "))
}

pub fn residual_text(r: &Residual, space: &GradedSpace) -> String {
    match r {
        Residual::Element(e) => e.display(space).to_string(),
        Residual::Words(w) => w.display(space).to_string(),
        Residual::Pairs(p) => format!("{p:?}"),
        Residual::Note(s) => s.clone(),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub skipped: usize,
}

/// The checks run on one input file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Section {
    pub input: String,
    pub records: Vec<Record>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub truncation: Option<u32>,
    pub max_arity: usize,
    pub seed: u64,
    pub suites: Vec<String>,
    pub sections: Vec<Section>,
    pub summary: Summary,
}

impl Report {
    pub fn new(truncation: Option<u32>, max_arity: usize, seed: u64, suites: Vec<String>) -> Self {
        Self {
            truncation,
            max_arity,
            seed,
            suites,
            sections: Vec::new(),
            summary: Summary::default(),
        }
    }

    pub fn push(&mut self, section: Section) {
        for r in &section.records {
            match r.status {
                Status::Pass => self.summary.passed += 1,
                Status::Fail => self.summary.failed += 1,
                Status::Inconclusive => self.summary.inconclusive += 1,
                Status::Skipped => self.summary.skipped += 1,
            }
        }
        self.sections.push(section);
    }

    pub fn failed(&self) -> bool {
        self.summary.failed > 0
    }

    pub fn records(&self) -> impl Iterator<Item = &Record> {
        self.sections.iter().flat_map(|s| s.records.iter())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let truncation = self.truncation.map_or_else(|| "from file".to_string(), |k| k.to_string());
        let _ = writeln!(
            out,
            "suites: {} | max arity {} | truncation {} | seed {}",
            self.suites.join(","),
            self.max_arity,
            truncation,
            self.seed
        );
        for section in &self.sections {
            let _ = writeln!(out, "\n== {}", section.input);
            for r in &section.records {
                let _ = write!(out, "{:<12} [{}] {}", r.status.label(), r.suite, r.name);
                if r.checked > 0 {
                    let _ = write!(out, " ({} checked)", r.checked);
                }
                let _ = writeln!(out, "  <{}>", r.anchor);
                if let Some(w) = &r.witness {
                    let _ = writeln!(out, "      {w}");
                }
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "\nsummary: {} passed, {} failed, {} inconclusive, {} skipped",
            s.passed, s.failed, s.inconclusive, s.skipped
        );
        out
    }
}
