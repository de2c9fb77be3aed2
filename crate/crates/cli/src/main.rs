use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use leibniz_cli::{parse_suites, run, CliError, SessionConfig};

/// Verifies graded Lie and Leibniz structures, their Maurer-Cartan twists
/// and the transferred Leibniz-infinity morphism.
#[derive(Debug, Parser)]
#[command(name = "leibniz", version)]
struct Args {
    /// Description file (repeatable).
    #[arg(long, required = true)]
    input: Vec<PathBuf>,
    /// Largest arity checked.
    #[arg(long, default_value_t = 5)]
    max_arity: usize,
    /// Truncation order K of Q[t]/(t^K); overrides the file.
    #[arg(long)]
    truncation: Option<u32>,
    /// `all` or a comma-separated list of combinatorics, coalgebra,
    /// structure, mc, transfer, theorem, negative.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Seed of the mutation generator.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the report here: JSON if the name ends in `.json`, text
    /// otherwise.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write the B_n^j tables here.
    #[arg(long)]
    emit_b: Option<PathBuf>,
    /// Skip the structure and morphism checks run on load.
    #[arg(long)]
    no_validate_on_load: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(args: Args) -> Result<u8, CliError> {
    let cfg = SessionConfig {
        inputs: args.input,
        max_arity: args.max_arity,
        truncation: args.truncation,
        suites: parse_suites(&args.suite).map_err(CliError::Usage)?,
        seed: args.seed,
        emit_b: args.emit_b,
        validate_on_load: !args.no_validate_on_load,
    };
    let outcome = run(&cfg)?;
    let text = outcome.report.to_text();
    print!("{text}");
    if let Some(path) = &args.report {
        let body = if path.extension().is_some_and(|e| e == "json") {
            outcome.report.to_json()
        } else {
            text
        };
        std::fs::write(path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(outcome.exit_code as u8)
}
