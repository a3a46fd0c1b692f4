//! Command-line entry points: `simulate`, `verify`, `calibrate`, `norms`.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical failure,
//! 3 failed verification.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    Simulate,
    Verify,
    Calibrate,
    Norms,
}

#[derive(Debug, Parser)]
#[command(name = "disloc2d", version, about = "Dislocation-density solver and inequality harness")]
struct Cli {
    /// What to run.
    #[arg(value_enum)]
    command: Command,
    /// Configuration file.
    config: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config::RunConfig::load(&cli.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(commands::EXIT_CONFIG);
        }
    };
    let result = match cli.command {
        Command::Simulate => commands::simulate(&cfg),
        Command::Verify => commands::verify(&cfg),
        Command::Calibrate => commands::calibrate(&cfg),
        Command::Norms => commands::norms(&cfg),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
