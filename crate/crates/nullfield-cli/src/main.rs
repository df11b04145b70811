//! `nullfield`: verification suites and tracing tools.
//!
//! Exit status: 0 when the run passes, 1 when a suite fails or a computation
//! breaks down, 2 on bad flags or config.

mod args;
mod commands;
mod io;
mod verify;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use io::{merge, CliError, CliResult};

fn run(cli: &Cli) -> CliResult<bool> {
    let cfg = cli.config.as_deref();
    let name = cli.command.name();
    match &cli.command {
        Command::Verify(a) => verify::run_verify(&merge(a, cfg, name)?),
        Command::Trace(a) => commands::run_trace(&merge(a, cfg, name)?),
        Command::Rotation(a) => commands::run_rotation(&merge(a, cfg, name)?),
        Command::Link(a) => commands::run_link(&merge(a, cfg, name)?),
        Command::Monodromy(a) => commands::run_monodromy(&merge(a, cfg, name)?),
        Command::Diophantine(a) => commands::run_diophantine(&merge(a, cfg, name)?),
        Command::Seifert(a) => verify::run_seifert(&merge(a, cfg, name)?),
        Command::TransportCheck(a) => commands::run_transport_check(&merge(a, cfg, name)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
