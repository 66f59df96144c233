//! `stabform`: canonical forms, sampling and finite-blocklength bounds for
//! stabilizer codes from the command line.

mod bounds;
mod codec;
mod error;
mod io;
mod matrix;
mod par;
mod simulate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    /// Sweep tables only.
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "stabform", version, about = "Canonical forms, sampling and error bounds for stabilizer codes")]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical decomposition A = L·Π·R (JSON by default).
    Canon(matrix::CanonArgs),
    /// Rebuilds a matrix from a quintuple written by `canon`.
    Reconstruct(matrix::ReconstructArgs),
    /// Checks that a matrix or quintuple has the claimed structure.
    Verify(matrix::VerifyArgs),
    /// Draws uniformly random matrices.
    #[command(subcommand)]
    Sample(matrix::SampleCommand),
    /// Exact sizes of the sampled families.
    #[command(subcommand)]
    Count(matrix::CountCommand),
    /// Converse and achievability bounds on the error-guessing probability.
    #[command(subcommand)]
    Bounds(bounds::BoundsCommand),
    /// Monte-Carlo estimate of the error-guessing probability.
    Simulate(simulate::SimulateArgs),
}

fn run(cli: &Cli) -> CliResult<String> {
    let f = cli.format;
    match &cli.command {
        Command::Canon(a) => matrix::canon(a, f),
        Command::Reconstruct(a) => matrix::reconstruct_cmd(a, f),
        Command::Verify(a) => matrix::verify(a, f),
        Command::Sample(c) => matrix::sample(c, f),
        Command::Count(c) => matrix::count(c, f),
        Command::Bounds(c) => bounds::run(c, f),
        Command::Simulate(a) => simulate::run(a, f),
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprint!("{}", io::pretty(&e.to_json()));
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            // Help and version are not errors.
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.render().to_string();
            let message = message.trim().trim_start_matches("error: ");
            return fail(&CliError::Usage(message.to_owned()));
        }
    };
    // Output is built in full before anything is written, so a failure never
    // leaves a partial result behind.
    match run(&cli).and_then(|body| io::write_output(cli.out.as_deref(), &body)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
