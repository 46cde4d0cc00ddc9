//! Front end for the `aomm` binary.
//!
//! Exit codes: 0 success, 1 failed verification or replay, 2 usage or
//! config error, 3 runtime error.

pub mod args;
pub mod commands;
pub mod manifest;
pub mod plot;
pub mod tables;
pub mod verify;

use std::ffi::OsString;

use clap::Parser;

use args::{Cli, Command};
use commands::{CliError, EXIT_OK};

pub fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Spectrum(a) => commands::cmd_spectrum(a),
        Command::DelaySurface(a) => commands::cmd_delay_surface(a),
        Command::Verify(a) => commands::cmd_verify(a),
        Command::Plot(a) => commands::cmd_plot(a),
        Command::Replay(a) => commands::cmd_replay(a),
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code().clamp(0, 255) as u8;
        }
    };
    match dispatch(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
