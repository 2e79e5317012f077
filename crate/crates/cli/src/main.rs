//! `portsim`: verification suites, seeded teleportation runs, and tables.
//!
//! Exit codes: 0 on success, 1 when a check fails, 2 on a usage error.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("portsim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
