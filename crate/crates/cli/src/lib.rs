//! Command-line front end: argument parsing, dispatch to the library and
//! report emission.
//!
//! Exit codes: 0 when the property holds, the value was computed or the
//! search is certified; 1 when a property fails (the report carries a
//! witness); 2 when a search ran out of budget; 64 for usage and input
//! errors; 70 when two independent computations disagree.

mod commands;
pub mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use report::{emit_report, Format, Report};
use serde::Serialize;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser, Serialize)]
#[command(name = "frameproof", version, about = "Frameproof codes, cover-free families and their bounds")]
pub struct RunConfig {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Seed for randomized self-checks.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Check the frameproof or separating hash property of a code.
    Verify(VerifyArgs),
    /// Check properties of a set family.
    Family(FamilyArgs),
    /// Check disjunctness and related structure of a binary matrix.
    Matrix(MatrixArgs),
    /// Evaluate upper bounds.
    Bounds(BoundsArgs),
    /// Exhaustive search for maximum codes or cover-free families.
    Search(SearchArgs),
    /// Smallest length where the maximum size first exceeds the length.
    Threshold(ThresholdArgs),
    /// Bounds table and certified maximum for one parameter cell.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyArg {
    Definitional,
    CoverFree,
    Crosscheck,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct VerifyArgs {
    /// Code file, JSON or text.
    #[arg(long)]
    pub code: PathBuf,
    /// Largest coalition size.
    #[arg(short = 't', long = "t", default_value_t = 2)]
    pub t: usize,
    /// Use wide-sense descendants.
    #[arg(long)]
    pub wide: bool,
    /// How the wide-sense properties are decided.
    #[arg(long, value_enum, default_value = "cover-free")]
    pub strategy: StrategyArg,
    /// Check the separating hash property of type {W1, W2} instead.
    #[arg(long, num_args = 2, value_names = ["W1", "W2"])]
    pub shf: Option<Vec<usize>>,
    /// Re-check the witness of an earlier verify report.
    #[arg(long)]
    pub witness: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyCheck {
    Sperner,
    Lym,
    CoverFree,
    Intersecting,
    NonCovering,
    CloseSperner,
    Shadow,
    Complement,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct FamilyArgs {
    /// Family file, text or JSON.
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long, value_enum)]
    pub check: FamilyCheck,
    /// Cover-free strength, or the non-covering parameter.
    #[arg(short = 't', long = "t", default_value_t = 1)]
    pub t: usize,
    /// Intersection arity for general cover-freeness (with --r2).
    #[arg(long, requires = "r2")]
    pub r1: Option<usize>,
    /// Union arity for general cover-freeness (with --r1).
    #[arg(long, requires = "r1")]
    pub r2: Option<usize>,
    /// Intersecting arity, or the shadow depth (negative for the upper shadow).
    #[arg(short = 'r', long = "r", default_value_t = 2, allow_negative_numbers = true)]
    pub r: i64,
    /// Allowed closeness values for the close-Sperner check.
    #[arg(long, value_delimiter = ',')]
    pub close: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixCheck {
    Disjunct,
    Isolated,
    Peel,
    PrivatePairs,
    Matching,
    ClassifySquare,
    ClassifyTall,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct MatrixArgs {
    /// Matrix file in text form.
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long, value_enum)]
    pub check: MatrixCheck,
    /// Disjunctness strength.
    #[arg(short = 't', long = "t", default_value_t = 1)]
    pub t: usize,
    /// Column to peel, 1-based.
    #[arg(long, default_value_t = 1)]
    pub column: usize,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct BoundsArgs {
    /// Every bound that evaluates for the given parameters (the default).
    #[arg(long, conflicts_with_all = ["name", "best"])]
    pub all: bool,
    /// A single catalogue entry, e.g. general_t.
    #[arg(long)]
    pub name: Option<String>,
    /// The smallest exact bound on frameproof codes.
    #[arg(long, requires_all = ["n", "t", "q"])]
    pub best: bool,
    #[arg(short = 'n', long = "n")]
    pub n: Option<u64>,
    #[arg(short = 't', long = "t")]
    pub t: Option<u64>,
    #[arg(short = 'q', long = "q")]
    pub q: Option<u64>,
    #[arg(short = 's', long = "s")]
    pub s: Option<u64>,
    /// Rational parameter such as 1/3.
    #[arg(long)]
    pub eps: Option<String>,
    /// Bits of precision for real-valued bounds.
    #[arg(long, default_value_t = 64)]
    pub precision: u32,
    /// Wide-sense codes for --best.
    #[arg(long)]
    pub wide: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchObject {
    Code,
    CoverFree,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct SearchArgs {
    #[arg(long, value_enum, default_value = "code")]
    pub object: SearchObject,
    #[arg(short = 'n', long = "n")]
    pub n: usize,
    #[arg(short = 't', long = "t")]
    pub t: usize,
    #[arg(short = 'q', long = "q", default_value_t = 2)]
    pub q: usize,
    /// Wide-sense frameproof codes.
    #[arg(long)]
    pub wide: bool,
    /// List every optimum up to equivalence.
    #[arg(long)]
    pub optima: bool,
    /// List every object of exactly this size instead of maximizing.
    #[arg(long, conflicts_with = "optima")]
    pub size: Option<usize>,
    /// Node budget.
    #[arg(long, default_value_t = 50_000_000)]
    pub budget: u64,
    /// Stop once a closed-form bound is met.
    #[arg(long)]
    pub use_bounds: bool,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ThresholdArgs {
    /// One of n_star, n_q, n_q_prime.
    #[arg(long)]
    pub kind: String,
    #[arg(short = 't', long = "t")]
    pub t: u64,
    #[arg(short = 'q', long = "q", default_value_t = 2)]
    pub q: u64,
    /// Largest length to scan.
    #[arg(long, default_value_t = 8)]
    pub cap: u64,
    #[arg(long, default_value_t = 50_000_000)]
    pub budget: u64,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ReportArgs {
    #[arg(short = 'n', long = "n")]
    pub n: usize,
    #[arg(short = 't', long = "t")]
    pub t: usize,
    #[arg(short = 'q', long = "q", default_value_t = 2)]
    pub q: usize,
    #[arg(long)]
    pub wide: bool,
    #[arg(long, default_value_t = 50_000_000)]
    pub budget: u64,
    /// Random codes on which to compare independent verifiers.
    #[arg(long, default_value_t = 0)]
    pub self_check: usize,
}

/// Failures that end a run without a report.
#[derive(Debug)]
pub enum CliError {
    /// A library error, with the file it came from when there is one.
    Lib {
        path: Option<PathBuf>,
        err: frameproof::Error,
    },
    Io { path: PathBuf, err: std::io::Error },
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib {
                err: frameproof::Error::Uncertified(_),
                ..
            } => 2,
            CliError::Lib {
                err: frameproof::Error::Consistency(_),
                ..
            } => 70,
            _ => 64,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib {
                path: Some(p),
                err: frameproof::Error::Parse { line, column, message },
            } => write!(f, "{}:{line}:{column}: {message}", p.display()),
            CliError::Lib { path: Some(p), err } => write!(f, "{}: {err}", p.display()),
            CliError::Lib { path: None, err } => write!(f, "{err}"),
            CliError::Io { path, err } => write!(f, "{}: {err}", path.display()),
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl From<frameproof::Error> for CliError {
    fn from(err: frameproof::Error) -> Self {
        CliError::Lib { path: None, err }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Reads a file and parses it, attaching the path to any error.
pub(crate) fn load<T>(path: &Path, parse: impl FnOnce(&str) -> frameproof::Result<T>) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|err| CliError::Io {
        path: path.to_owned(),
        err,
    })?;
    parse(&text).map_err(|err| CliError::Lib {
        path: Some(path.to_owned()),
        err,
    })
}

/// Runs one parsed command.
pub fn dispatch(cfg: &RunConfig) -> CliResult<Report> {
    commands::run(cfg)
}

/// Parses `args`, runs the command and writes the report. Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match dispatch(&cfg) {
        Ok(report) => {
            let _ = out.write_all(emit_report(&report, cfg.format).as_bytes());
            report.status.code()
        }
        Err(e) => {
            let _ = writeln!(err, "frameproof: {e}");
            e.exit_code()
        }
    }
}
