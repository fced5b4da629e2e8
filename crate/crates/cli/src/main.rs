//! `starmap` command-line front end.
//!
//! Exit codes: 0 on success, 1 when the answer is negative (not equal,
//! no witness, unknown, rejected certificate), 2 on malformed input.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use starmap::ramsey::DEFAULT_HORIZON;

use report::{Failure, Report};

#[derive(Debug, Parser)]
#[command(
    name = "starmap",
    version,
    about = "Star-map normal forms, hypernatural terms, u-equivalence and Ramsey searches"
)]
struct Cli {
    #[command(flatten)]
    globals: Globals,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Globals {
    /// Print a versioned JSON object instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for searches; defaults to the available parallelism.
    #[arg(long, global = true, env = "STARMAP_THREADS")]
    threads: Option<usize>,
    /// Reject compositions used outside the inner map's reach.
    #[arg(long, global = true)]
    strict_domains: bool,
    /// Largeness oracle horizon for extraction searches.
    #[arg(long, global = true, default_value_t = DEFAULT_HORIZON)]
    horizon: u64,
    /// Proof depth for u-equivalence derivations.
    #[arg(long, global = true, default_value_t = 12)]
    depth: u32,
    /// Report wall-clock time in JSON output (otherwise `durationMs` is 0).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normal form of a composition.
    Norm { expr: String },
    /// Whether two compositions have the same normal form.
    Eq { lhs: String, rhs: String },
    /// Natural domain index of a composition.
    Dom { expr: String },
    /// Level reached from probe level `p`.
    Transport { expr: String, p: u32 },
    /// Every composition up to the given index and length, with its normal form.
    Enum { max_index: u32, max_len: usize },
    /// Applies a composition to a hypernatural term.
    HnatApply { map: String, term: String },
    /// Compares two hypernatural terms.
    HnatCmp { lhs: String, rhs: String },
    /// Searches for a derivation of a u-equivalence goal.
    UeqDerive {
        axioms: PathBuf,
        goal: String,
        /// Largest standard parameter used for scheme instances.
        #[arg(long)]
        scheme_bound: Option<u64>,
    },
    /// Searches for a monochromatic pattern or runs an extraction.
    Search(SearchArgs),
    /// Re-checks a certificate produced by `search`.
    Verify {
        certificate: PathBuf,
        #[command(flatten)]
        coloring: ColoringArgs,
        /// Pattern points for homothetic certificates.
        #[arg(long)]
        shape: Option<String>,
        /// Predicate family for extraction certificates.
        #[arg(long)]
        predicate: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SearchKind {
    Schur,
    Brauer,
    Ramsey,
    Homothetic,
    Exp,
    HalfGrid,
    Pattern4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExpKindArg {
    Mul2,
    Exp,
}

#[derive(Debug, Args)]
struct ColoringArgs {
    /// Builtin coloring: constant, bitlen-parity or residue.
    #[arg(long, conflicts_with = "table")]
    builtin: Option<String>,
    /// Modulus for the residue builtin.
    #[arg(long)]
    modulus: Option<u64>,
    /// Coloring table file (header `k s r N`, then one line per tuple).
    #[arg(long)]
    table: Option<PathBuf>,
    /// Tuple arity of a builtin coloring.
    #[arg(long, default_value_t = 1)]
    arity: u32,
    /// Point dimension of a builtin coloring.
    #[arg(long, default_value_t = 1)]
    dim: u32,
    /// Color count of a builtin coloring.
    #[arg(long = "r")]
    colors: Option<u32>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    kind: SearchKind,
    #[command(flatten)]
    coloring: ColoringArgs,
    /// Box size; defaults to what a table covers.
    #[arg(long = "N")]
    n: Option<u64>,
    /// Size of the monochromatic set (ramsey).
    #[arg(long, default_value_t = 3)]
    h: usize,
    /// Progression length (brauer).
    #[arg(long, default_value_t = 1)]
    l: u64,
    /// Pattern points, `;`-separated with `,` between coordinates (homothetic).
    #[arg(long, default_value = "0;1;2")]
    shape: String,
    /// Search bound for `a` and `b` (exp).
    #[arg(long, default_value_t = 64)]
    bound: u64,
    /// Exponential pattern (exp).
    #[arg(long, value_enum, default_value_t = ExpKindArg::Mul2)]
    exp_kind: ExpKindArg,
    /// Allow `a = b` in Schur triples.
    #[arg(long)]
    relaxed: bool,
    /// Predicate family (half-grid, pattern4): full, less, parity, distinct, empty.
    #[arg(long, default_value = "less")]
    predicate: String,
    /// Sequence length (half-grid, pattern4).
    #[arg(long, default_value_t = 8)]
    m: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let name = cli.command.name();
    let outcome = commands::run(&cli.command, &cli.globals);
    let elapsed = cli.globals.timing.then(|| start.elapsed());
    match outcome {
        Ok(report) => report.emit(name, cli.globals.json, elapsed),
        Err(failure) => failure.emit(name),
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Norm { .. } => "norm",
            Command::Eq { .. } => "eq",
            Command::Dom { .. } => "dom",
            Command::Transport { .. } => "transport",
            Command::Enum { .. } => "enum",
            Command::HnatApply { .. } => "hnat-apply",
            Command::HnatCmp { .. } => "hnat-cmp",
            Command::UeqDerive { .. } => "ueq-derive",
            Command::Search(_) => "search",
            Command::Verify { .. } => "verify",
        }
    }
}

pub(crate) type Outcome = Result<Report, Failure>;
