//! Command-line front end. Every artifact is JSON (CSV for bound tables) and
//! records the seed it was produced with.

mod commands;
mod selftest;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;

pub use selftest::{selftest_report, SelftestCase};

/// Seed used when neither `--seed` nor `BALLCOVER_SEED` is given.
pub const DEFAULT_SEED: u64 = 7;

/// Exit code for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit code for usage and internal errors.
pub const EXIT_ERROR: i32 = 1;
/// Exit code when a verification ran and failed.
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ballcover", version, about = "Explicit unit-ball coverings in l_p spaces")]
pub struct Cli {
    /// Print machine-readable JSON on stdout instead of a summary.
    #[arg(long, global = true)]
    pub json: bool,

    /// Base seed for every randomized step.
    #[arg(long, global = true, env = "BALLCOVER_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hadamard matrix of order N (powers of two).
    Hadamard {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Equiangular tight frame from a Hadamard matrix of order M.
    Etf {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dictionary construction and analysis.
    #[command(subcommand)]
    Dict(DictCommand),
    /// Covering construction and certification.
    #[command(subcommand)]
    Cover(CoverCommand),
    /// Unit vector far from every one of d given centers.
    Witness {
        #[arg(long)]
        d: usize,
        #[arg(long, value_parser = parse_exponent)]
        p: f64,
        /// JSON file holding an array of d centers (or an object with "centers").
        #[arg(long)]
        centers: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Covering-number bounds.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Margin checks across every construction at fixed budgets.
    Selftest {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum DictCommand {
    /// Greedy maximal μ-coherent dictionary.
    Greedy {
        #[arg(long)]
        d: usize,
        #[arg(long, value_parser = parse_exponent)]
        p: f64,
        #[arg(long)]
        mu: f64,
        /// Consecutive rejections that end construction.
        #[arg(long, default_value_t = crate::dictionaries::DEFAULT_SATURATION_TRIALS)]
        saturation: usize,
        /// Also close gaps found by reference sampling and hole descent.
        #[arg(long)]
        complete: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coherence and coherence-matrix rank of a stored dictionary.
    Coherence {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    Simplex,
    SimplexShrunk,
    Etf,
    DictL2,
    DictBanach,
    Axis,
    Basis,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long, value_enum)]
    pub construction: Construction,
    #[arg(long)]
    pub d: usize,
    #[arg(long, value_parser = parse_exponent, default_value = "2")]
    pub p: f64,
    /// Coherence threshold for dictionary constructions.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Basis constant for the basis construction.
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    /// Compose the covering with itself this many times.
    #[arg(long)]
    pub iterate: Option<u32>,
    /// Sphere samples used to certify dictionary maximality.
    #[arg(long, default_value_t = 10_000)]
    pub maximality_samples: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum CoverCommand {
    Build(BuildArgs),
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Total samples, split evenly between the ball and the sphere.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Restarts of the adversarial search (0 disables it).
        #[arg(long, default_value_t = 0)]
        adversarial: usize,
        /// Ascent steps per adversarial restart.
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum BoundsCommand {
    Table {
        #[arg(long)]
        d: usize,
        #[arg(long, value_parser = parse_exponent)]
        p: f64,
        /// Grid of shrinkages `a:b:n`.
        #[arg(long)]
        delta_grid: String,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        c1: Option<f64>,
        #[arg(long)]
        c2: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
    },
}

/// Accepts a number or `inf`.
fn parse_exponent(s: &str) -> Result<f64, String> {
    match s.trim() {
        "inf" | "infinity" | "Inf" => Ok(f64::INFINITY),
        t => t.parse::<f64>().map_err(|e| format!("invalid exponent {s:?}: {e}")),
    }
}

/// Result of a command: machine output plus whether verification passed.
pub(crate) struct Outcome {
    pub(crate) report: serde_json::Value,
    pub(crate) summary: String,
    pub(crate) passed: bool,
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn dispatch<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    dispatch_to(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`dispatch`] with explicit output streams.
pub fn dispatch_to<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    match commands::run(&cli) {
        Ok(outcome) => {
            let written = if cli.json {
                serde_json::to_string_pretty(&outcome.report)
                    .map_err(Error::from)
                    .and_then(|s| writeln!(out, "{s}").map_err(Error::from))
            } else {
                writeln!(out, "{}", outcome.summary).map_err(Error::from)
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return EXIT_ERROR;
            }
            if outcome.passed {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}
