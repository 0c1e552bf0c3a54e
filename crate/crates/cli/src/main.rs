//! `exciton` — command-line front end for the exciton-chain decoherence
//! toolkit.
//!
//! Subcommands:
//! * `run` — emit a preset data product (coefficient table, η scans,
//!   protocol trace, witness report) as CSV files.
//! * `sweep` — protocol-engine hopping coefficient over an η grid with a
//!   closed-form reference column (worker pool, ordered rows).
//! * `verify` — headless self-check suite; one line per named check.
//!
//! Exit codes: 0 success, 1 validation or I/O error, 2 resource cap
//! exceeded, 3 verification failure. Identical inputs produce
//! byte-identical CSV output.

mod manifest;
mod products;
mod verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use exciton_core::error::CoreError;

use manifest::Grid;

/// CLI failure carrying its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad config, unreadable/unwritable files → exit 1.
    Validation(String),
    /// Run would exceed the joint-qubit cap → exit 2.
    ResourceCap(String),
    /// One or more verify checks failed → exit 3.
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::ResourceCap(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(msg)
            | CliError::ResourceCap(msg)
            | CliError::Verification(msg) => f.write_str(msg),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::ResourceCap(msg) => {
                CliError::ResourceCap(format!("resource cap exceeded: {msg}"))
            }
            other => CliError::Validation(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "exciton",
    version,
    about = "Exciton-chain decoherence toolkit: protocol runs, η sweeps, witness reports"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a preset data product as CSV.
    Run(RunArgs),
    /// Sweep the protocol engine over an η grid (ordered, deterministic).
    Sweep(SweepArgs),
    /// Run the named self-checks; nonzero exit on any failure.
    Verify(VerifyArgs),
}

#[derive(Args)]
pub struct RunArgs {
    /// JSON config file: {n_monomers, n_reservoir, eta, t, couplings,
    /// fields, environment, engine}; all fields optional.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Data product: table1 | fig4 | fig5 | fig6 | figs7-9 | trace | witness.
    #[arg(long, default_value = "table1")]
    pub preset: String,

    /// η grid as start:stop:count with 0 ≤ start ≤ stop ≤ π/2, count ≥ 2.
    #[arg(long, value_parser = manifest::parse_grid)]
    pub grid: Option<Grid>,

    /// Output directory for the CSV files.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,

    /// Engine override: exact | pert2.
    #[arg(long)]
    pub engine: Option<String>,

    /// Environment override: markov | nonmarkov.
    #[arg(long)]
    pub env: Option<String>,
}

#[derive(Args)]
pub struct SweepArgs {
    /// JSON config file (same schema as `run --config`).
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// η grid as start:stop:count with 0 ≤ start ≤ stop ≤ π/2, count ≥ 2.
    #[arg(long, value_parser = manifest::parse_grid)]
    pub grid: Option<Grid>,

    /// Output directory for sweep.csv.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,

    /// Engine override: exact | pert2.
    #[arg(long)]
    pub engine: Option<String>,

    /// Environment override: markov | nonmarkov.
    #[arg(long)]
    pub env: Option<String>,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Run only checks whose name contains this substring.
    #[arg(long)]
    pub only: Option<String>,

    /// Perturb a cosine exponent to demonstrate the suite catches faults.
    #[arg(long)]
    pub inject_fault: bool,
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => products::cmd_run(&args),
        Command::Sweep(args) => products::cmd_sweep(&args),
        Command::Verify(args) => verify::cmd_verify(&args),
    }
}

fn main() {
    let code = match Cli::try_parse() {
        Ok(cli) => match dispatch(cli) {
            Ok(()) => 0,
            Err(err) => {
                eprintln!("error: {err}");
                err.exit_code()
            }
        },
        // Help/version displays are not errors; genuine usage errors are
        // validation failures (exit 1), not clap's default exit 2, which
        // this tool reserves for the resource cap.
        Err(err) => {
            if err.use_stderr() {
                eprint!("{err}");
                1
            } else {
                print!("{err}");
                0
            }
        }
    };
    std::process::exit(code);
}
