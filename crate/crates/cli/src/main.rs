//! `squeeze`: squeezing-function values, bounds, extremal searches, sweep
//! tables and self-checks.
//!
//! Scalar queries print one JSON record per line; tables print CSV. Input
//! errors exit with status 2 and a message on stderr.

mod checks;
mod commands;
mod parse;
mod record;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use crate::checks::Suite;
use crate::record::OutFormat;

/// A malformed flag, descriptor, point or configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Parser)]
#[command(name = "squeeze", version, about = "Squeezing-function values and bounds")]
struct Cli {
    /// Output format; json for scalar queries and csv for tables by default.
    #[arg(long, global = true, value_enum)]
    out: Option<OutFormat>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact values on classical domains, products, balls and punctured balls.
    Exact(ExactArgs),
    /// Certified lower and upper bounds.
    Bound(BoundArgs),
    /// Extremal-embedding search on an annulus.
    Search(SearchArgs),
    /// Sweep tables.
    Table(TableArgs),
    /// Invariant suites.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
struct ExactArgs {
    /// typeI:r,s | typeII:p | typeIII:q | typeIV:n | ball:n | punctured-ball:n | product:<desc>+<desc>+...
    #[arg(long)]
    domain: String,
    /// Comma-separated re,im pairs (or one real per coordinate).
    #[arg(long)]
    point: Option<String>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("target").required(true).args(["annulus", "punctured_ball", "excised", "c_constant"])))]
struct BoundArgs {
    /// Annulus inner radius r.
    #[arg(long)]
    annulus: Option<f64>,
    /// Modulus of a real point of the annulus.
    #[arg(long, conflicts_with = "point")]
    rho: Option<f64>,
    #[arg(long)]
    point: Option<String>,
    /// Conjectured closed form at the folded modulus instead of the proven bound.
    #[arg(long, requires = "annulus", conflicts_with = "caratheodory")]
    conjecture: bool,
    /// Carathéodory-norm estimate from the annulus lower bound.
    #[arg(long, requires = "annulus")]
    caratheodory: bool,
    /// Dimension of a punctured unit ball.
    #[arg(long)]
    punctured_ball: Option<usize>,
    /// `;`-separated puncture points; none means the ball itself.
    #[arg(long, requires = "punctured_ball")]
    punctures: Option<String>,
    /// JSON file `{u, v, w, excisions: [{a_re, a_im, r}]}`.
    #[arg(long)]
    excised: Option<PathBuf>,
    /// The constant c(u, v, w).
    #[arg(long, value_name = "U,V,W")]
    c_constant: Option<String>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    annulus: f64,
    #[arg(long, conflicts_with = "point", required_unless_present = "point")]
    rho: Option<f64>,
    #[arg(long)]
    point: Option<String>,
    /// Laurent degree; 0 keeps the Möbius baseline.
    #[arg(long, default_value_t = 2)]
    degree: usize,
    /// Objective evaluations for the simplex phase.
    #[arg(long, default_value_t = squeeze_core::search::DEFAULT_BUDGET)]
    budget: usize,
    /// Target grid of the injectivity certificate.
    #[arg(long, default_value_t = squeeze_core::search::DEFAULT_CERTIFICATE_GRID)]
    grid: usize,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("target").required(true).args(["annulus", "punctured_ball"])))]
struct TableArgs {
    #[arg(long)]
    annulus: Option<f64>,
    #[arg(long)]
    punctured_ball: Option<usize>,
    /// `;`-separated puncture points; the origin by default.
    #[arg(long, requires = "punctured_ball")]
    punctures: Option<String>,
    /// Number of rows.
    #[arg(long, default_value_t = 32)]
    samples: usize,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let outcome = match &cli.command {
        Command::Exact(args) => commands::exact(args, cli.out.unwrap_or(OutFormat::Json), &mut stdout),
        Command::Bound(args) => commands::bound(args, cli.out.unwrap_or(OutFormat::Json), &mut stdout),
        Command::Search(args) => commands::search(args, cli.seed, cli.out.unwrap_or(OutFormat::Json), &mut stdout),
        Command::Table(args) => commands::table(args, cli.out.unwrap_or(OutFormat::Csv), &mut stdout),
        Command::Check(args) => return checks::run(args.suite, cli.seed, &mut stdout),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(commands::Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(commands::Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
