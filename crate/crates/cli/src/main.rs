mod commands;
mod output;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gcnn_vc::synth::SynthMode;
use serde::Serialize;

/// Exit codes: 0 success, 1 I/O or internal error, 2 bad input, 3 group too
/// small, 4 required element missing, 5 verification disagreement.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    pub fn invariant(message: impl Into<String>) -> Self {
        Self { code: 5, message: message.into() }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self::internal(format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<gcnn_vc::Error> for Failure {
    fn from(e: gcnn_vc::Error) -> Self {
        use gcnn_vc::Error as E;
        let code = match &e {
            E::GroupTooSmall { .. } => 3,
            E::MissingElement(_) => 4,
            E::WitnessRejected { .. } | E::SynthVerification(_) => 5,
            E::Singular | E::Overflow(_) => 1,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "gcnn-vc",
    version,
    about = "Fixed-kernel group convolutional classifiers: kernel synthesis and shattering certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a minimal complete set of orders of [m].
    Orders(OrdersArgs),
    /// Synthesize a kernel that shatters m functions and certify it.
    Synth(SynthArgs),
    /// Certify shattering for a kernel and a list of functions.
    Verify(VerifyArgs),
    /// Tabulate the VC-dimension bounds for group orders.
    Bounds(BoundsArgs),
    /// Build or validate a group.
    #[command(subcommand)]
    Group(GroupCommand),
}

#[derive(Debug, Args, Serialize)]
pub struct OrdersArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=32))]
    pub m: u32,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct SynthArgs {
    /// Group spec, e.g. cyclic:48, dihedral:9, product:cyclic:2,cyclic:9
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value = "order_two")]
    pub mode: SynthMode,
    #[arg(long, default_value = "1")]
    pub b: String,
    #[arg(long, default_value = "2")]
    pub c: String,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Allow m above 8; rational sizes grow very fast.
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub kernel: PathBuf,
    /// JSON array of functions.
    #[arg(long)]
    pub functions: PathBuf,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundsArgs {
    /// Comma-separated group orders.
    #[arg(long, default_value = "")]
    pub n: String,
    /// Certificate files whose shattered size fills the achieved column.
    #[arg(long)]
    pub achieved: Vec<PathBuf>,
    /// Also write the table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Print CSV instead of the aligned table.
    #[arg(long)]
    pub print_csv: bool,
}

#[derive(Debug, Subcommand)]
enum GroupCommand {
    /// Print the Cayley and inverse tables as JSON.
    Build(GroupBuildArgs),
    /// Check the group axioms on the built tables.
    Validate(GroupValidateArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct GroupBuildArgs {
    #[arg(long)]
    pub spec: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct GroupValidateArgs {
    #[arg(long)]
    pub spec: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Orders(a) => commands::orders(a),
        Command::Synth(a) => commands::synth(a),
        Command::Verify(a) => commands::verify(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Group(GroupCommand::Build(a)) => commands::group_build(a),
        Command::Group(GroupCommand::Validate(a)) => commands::group_validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
