//! Batch harness around `leibniz-core`: loads description files, runs the
//! verification suites and renders deterministic reports.

pub mod description;
pub mod report;
pub mod suites;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use description::{load_description, Description, Session};
pub use report::{Record, Report, Section, Status};
pub use suites::{parse_suites, Suite};

/// Problems that stop a run before any check (exit code 2).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid description: {0}")]
    Invalid(String),
    #[error("usage: {0}")]
    Usage(String),
}

impl CliError {
    pub(crate) fn in_file(self, path: &Path) -> Self {
        let p = path.display();
        match self {
            CliError::Parse(m) => CliError::Parse(format!("{p}: {m}")),
            CliError::Invalid(m) => CliError::Invalid(format!("{p}: {m}")),
            other => other,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SessionConfig {
    pub inputs: Vec<PathBuf>,
    pub max_arity: usize,
    pub truncation: Option<u32>,
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub emit_b: Option<PathBuf>,
    pub validate_on_load: bool,
}

impl Default for SessionConfig {
    fn default() -> Self {
        Self {
            inputs: Vec::new(),
            max_arity: 5,
            truncation: None,
            suites: Suite::ALL.to_vec(),
            seed: 0,
            emit_b: None,
            validate_on_load: true,
        }
    }
}

impl SessionConfig {
    fn validate(&self) -> Result<(), CliError> {
        if self.inputs.is_empty() {
            return Err(CliError::Usage("at least one --input is required".into()));
        }
        if self.max_arity < 2 {
            return Err(CliError::Usage("--max-arity must be at least 2".into()));
        }
        if self.truncation == Some(0) {
            return Err(CliError::Usage("--truncation must be at least 1".into()));
        }
        if self.emit_b.is_some() && self.inputs.len() != 1 {
            return Err(CliError::Usage("--emit-b needs exactly one input".into()));
        }
        Ok(())
    }
}

/// Checks run on load: every structure, the element and the morphism.
fn load_checks(session: &Session, max_arity: usize) -> Vec<Record> {
    const S: &str = "load";
    let mut out = Vec::new();
    for (name, g) in &session.structures {
        let rep = g.check_structure();
        let mut r = Record::pass_if(S, format!("structure {name} is valid"), "d^2 = 0, derivation, Jacobi, Q^2 = 0", rep.passed());
        if !rep.passed() {
            let failing = [&rep.d_squared, &rep.derivation, &rep.jacobi, &rep.square]
                .into_iter()
                .chain(rep.antisymmetry.as_ref())
                .find(|c| !c.passed());
            if let Some(c) = failing {
                r = Record::from_check(S, "d^2 = 0, derivation, Jacobi, Q^2 = 0", c, g.space(), g.space());
                r.name = format!("structure {name} is valid: {}", c.name);
            }
        }
        out.push(r);
    }
    if let Some((name, alpha)) = &session.mc {
        let g = session.structure(name).expect("resolved on load");
        let ok = g.mc_check(alpha).map(|m| m.is_maurer_cartan()).unwrap_or(false);
        out.push(Record::pass_if(S, format!("mc_element is Maurer-Cartan in {name}"), "dα = ½[α,α]", ok));
    }
    if let Some((src, tgt, spec)) = &session.morphism {
        let anchor = "F∘Q = Q'∘F";
        match spec.build(max_arity) {
            Err(e) => out.push(Record::error(S, format!("morphism {src} -> {tgt}"), anchor, e)),
            Ok(f) => {
                let top = f.known_arity().map_or(max_arity, |k| k.min(max_arity));
                match f.verify(top) {
                    Ok(rep) => {
                        let mut r = Record::from_check(S, anchor, &rep, f.source().space(), f.target().space());
                        r.name = format!("morphism {src} -> {tgt} up to arity {top}");
                        out.push(r);
                    }
                    Err(e) => out.push(Record::error(S, format!("morphism {src} -> {tgt}"), anchor, e)),
                }
            }
        }
    }
    out
}

/// Result of a run: the report and the process exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

/// Runs every selected suite on every input.
pub fn run(cfg: &SessionConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let names = cfg.suites.iter().map(|s| s.name().to_string()).collect();
    let mut report = Report::new(cfg.truncation, cfg.max_arity, cfg.seed, names);
    let sessions = cfg
        .inputs
        .iter()
        .map(|p| load_description(p, cfg.truncation).map(|s| (p, s)))
        .collect::<Result<Vec<_>, _>>()?;
    for (path, session) in sessions {
        let mut records = Vec::new();
        if cfg.validate_on_load {
            records.extend(load_checks(&session, cfg.max_arity));
        }
        records.extend(run_session(&session, cfg)?);
        report.push(Section {
            input: path.display().to_string(),
            records,
        });
    }
    let exit_code = if report.failed() { 1 } else { 0 };
    Ok(Outcome { report, exit_code })
}

fn run_session(session: &Session, cfg: &SessionConfig) -> Result<Vec<Record>, CliError> {
    let mut out = Vec::new();
    let has = |s: Suite| cfg.suites.contains(&s);
    if has(Suite::Combinatorics) {
        out.extend(suites::combinatorics());
    }
    if has(Suite::Coalgebra) {
        out.extend(suites::coalgebra(session));
    }
    if has(Suite::Structure) {
        out.extend(suites::structure(session, cfg.seed));
    }
    if has(Suite::Mc) {
        out.extend(suites::mc(session, cfg.max_arity));
    }
    let wants_ctx = has(Suite::Transfer) || has(Suite::Theorem) || has(Suite::Negative) || cfg.emit_b.is_some();
    if !wants_ctx {
        return Ok(out);
    }
    let ctx = match suites::transfer_context(session, cfg.max_arity) {
        Ok(ctx) => ctx,
        Err(why) => {
            let missing = session.morphism.is_none() || session.mc.is_none();
            for s in [Suite::Transfer, Suite::Theorem, Suite::Negative].into_iter().filter(|&s| has(s)) {
                let status = if missing { Status::Skipped } else { Status::Fail };
                out.push(Record::new(s.name(), "B_n^j tables", "B = Σ_j B^j", status).with_witness(why.clone()));
            }
            if cfg.emit_b.is_some() {
                return Err(CliError::Usage(format!("--emit-b: {why}")));
            }
            return Ok(out);
        }
    };
    if has(Suite::Transfer) {
        out.extend(suites::transfer(&ctx));
    }
    if has(Suite::Theorem) {
        out.extend(suites::theorem(&ctx));
    }
    if has(Suite::Negative) {
        out.extend(suites::negative(&ctx));
    }
    if let Some(path) = &cfg.emit_b {
        let theorem_ok = ctx.verify_theorem().map(|r| r.passed()).unwrap_or(false);
        if theorem_ok {
            emit::write_tables(&ctx, path)?;
            out.push(Record::new("emit", format!("B_n^j tables written to {}", path.display()), "B = Σ_j B^j", Status::Pass));
        } else {
            out.push(
                Record::new("emit", "B_n^j tables", "B = Σ_j B^j", Status::Fail)
                    .with_witness("the tables are not written because the morphism identity fails"),
            );
        }
    }
    Ok(out)
}

pub mod emit {
    //! Writes the `B_n^j` tables in the description format.

    use std::path::Path;

    use leibniz_core::transfer::TransferContext;

    use crate::description::{entries_of, space_desc, structure_desc, Description, TableDesc, SCHEMA_VERSION};
    use crate::CliError;

    pub const SOURCE: &str = "source_derived";
    pub const TARGET: &str = "target_derived";

    /// The derived structures and every nonzero `B_n^j` as a description.
    pub fn tables_description(ctx: &TransferContext) -> Description {
        let (src, tgt) = (ctx.source_derived(), ctx.target_derived());
        Description {
            schema_version: SCHEMA_VERSION,
            truncation_order: ctx.order(),
            spaces: vec![space_desc(SOURCE, src.space()), space_desc(TARGET, tgt.space())],
            structures: vec![structure_desc(SOURCE, SOURCE, src), structure_desc(TARGET, TARGET, tgt)],
            mc_element: None,
            morphism: None,
            b_tables: ctx
                .tables()
                .iter()
                .map(|(&(n, j), m)| TableDesc {
                    arity: n,
                    j,
                    source: SOURCE.into(),
                    target: TARGET.into(),
                    entries: entries_of(m, src.space(), tgt.space()),
                })
                .collect(),
        }
    }

    pub fn write_tables(ctx: &TransferContext, path: &Path) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(&tables_description(ctx)).expect("plain data serializes");
        text.push('\n');
        std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}
