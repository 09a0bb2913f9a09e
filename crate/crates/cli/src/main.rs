use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use levi_cli::commands::{run_command, Command};
use levi_cli::model::load_model;
use levi_cli::report::{format_report, Format};
use levi_cli::CliError;

/// Levi components and parabolic subalgebras of finitary Lie algebras, from a model file.
#[derive(Debug, Parser)]
#[command(name = "levi", version)]
struct Args {
    /// Model file.
    model: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

/// Seed for randomized sampling; fixed unless `TOOL_SEED` is set.
fn seed() -> Result<u64, CliError> {
    match std::env::var("TOOL_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| CliError::Usage(format!("TOOL_SEED must be an unsigned integer, got `{s}`"))),
        Err(_) => Ok(0),
    }
}

fn run(args: &Args) -> Result<String, CliError> {
    let model = load_model(&args.model)?;
    let mut report = run_command(&model, &args.command, seed()?)?;
    let mut diags = model.diagnostics.clone();
    diags.append(&mut report.diagnostics);
    report.diagnostics = diags;
    Ok(format_report(&report, args.format))
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
