//! Command-line front end: definition files in, verification reports out.
//!
//! Exit codes: 0 when every check passes, 1 when a residual or a
//! `NONE_WITHIN_BOUND` outcome is reported, 2 on usage, parse or validation
//! errors.

mod commands;
pub mod deffile;
pub mod expr;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use deffile::{load, Definition, DefinitionFile};
pub use expr::{parse_expression, parse_multivector};
pub use report::Report;

#[derive(Parser, Debug)]
#[command(
    name = "liecalc",
    version,
    about = "Exact verification of Lie algebroid differentials"
)]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// A degree argument: an integer or `top+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    Value(usize),
    TopPlusOne,
}

impl Degree {
    pub fn resolve(self, top: usize) -> usize {
        match self {
            Degree::Value(k) => k,
            Degree::TopPlusOne => top + 1,
        }
    }
}

fn parse_degree(s: &str) -> Result<Degree, String> {
    if s == "top+1" {
        return Ok(Degree::TopPlusOne);
    }
    s.parse()
        .map(Degree::Value)
        .map_err(|_| format!("expected a nonnegative integer or top+1, got '{s}'"))
}

#[derive(Args, Debug)]
pub struct FileArg {
    /// Definition file (JSON).
    pub file: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the algebroid axioms and [m, m] = 0.
    Verify(FileArg),
    /// Schouten bracket of two multivector expressions or named tensors.
    Bracket {
        #[command(flatten)]
        input: FileArg,
        left: String,
        right: String,
    },
    /// Deformation-complex checks: ∂² = 0 on random multiderivations, or the
    /// cocycle condition of a named differential or of ad of a named tensor.
    DeformCheck {
        #[command(flatten)]
        input: FileArg,
        #[arg(long)]
        diff: Option<String>,
        #[arg(long)]
        tensor: Option<String>,
        #[arg(long, default_value_t = 9)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Validate named k-differentials (all of them by default).
    DiffValidate {
        #[command(flatten)]
        input: FileArg,
        #[arg(long)]
        diff: Option<String>,
    },
    /// Search for τ with δ = [τ, ·], or δ′ − δ = [τ, ·] with --other.
    DiffWitness {
        #[command(flatten)]
        input: FileArg,
        #[arg(long)]
        diff: String,
        #[arg(long)]
        other: Option<String>,
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Extract the characteristic pair of a differential, or validate a
    /// named pair.
    Charpair {
        #[command(flatten)]
        input: FileArg,
        #[arg(long)]
        diff: Option<String>,
        #[arg(long)]
        pair: Option<String>,
    },
    /// Build the jet algebroid and check its axioms.
    Jet(FileArg),
    /// Randomized jet group checks at rational points.
    JetgroupTest {
        #[command(flatten)]
        input: FileArg,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = parse_degree)]
        k: Option<Degree>,
    },
    /// Connections, Λ = Υ(Bπ) and primary pairs.
    Transitive {
        #[command(flatten)]
        input: FileArg,
        #[arg(long)]
        diff: Option<String>,
        #[arg(long)]
        other: Option<String>,
        /// Named ρ-compatible tensor.
        #[arg(long)]
        tensor: Option<String>,
        /// Named primary pair.
        #[arg(long)]
        pair: Option<String>,
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Point base: exact H¹(g, ∧^k g). Otherwise the bounded reduced space.
    Cohomology {
        #[command(flatten)]
        input: FileArg,
        #[arg(long, value_parser = parse_degree)]
        k: Degree,
        #[arg(long)]
        bound: Option<u32>,
    },
    /// The exceptional degrees k = 0 and k = top+1.
    Exceptional {
        #[command(flatten)]
        input: FileArg,
        #[arg(long, value_parser = parse_degree)]
        k: Degree,
        #[arg(long)]
        bound: Option<u32>,
        #[arg(long)]
        tensor: Option<String>,
        #[arg(long, default_value_t = 5)]
        points: usize,
    },
}

/// What the process prints and returns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parse `argv` (program name first), run the command and render the result.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: 2,
                }
            } else {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code: 0,
                }
            };
        }
    };
    let echo = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .filter(|a| a != "--json")
        .collect::<Vec<_>>()
        .join(" ");
    match commands::run(&cli.command, echo.clone()) {
        Ok(report) => Outcome {
            stdout: if cli.json {
                report.to_json()
            } else {
                report.to_text()
            },
            stderr: String::new(),
            code: report.exit_code(),
        },
        Err(e) => {
            let stdout = if cli.json {
                serde_json::to_string_pretty(&serde_json::json!({
                    "command": echo,
                    "error": e.to_string(),
                }))
                .expect("serializable")
                    + "\n"
            } else {
                String::new()
            };
            Outcome {
                stdout,
                stderr: format!("error: {e}\n"),
                code: 2,
            }
        }
    }
}
