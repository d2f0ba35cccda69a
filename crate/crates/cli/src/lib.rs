//! The `anosov` command-line tool.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 a pair expected to be
//! inequivalent was not refuted, 3 an internal invariant failed.

pub mod commands;
pub mod config;
pub mod error;
pub mod svg;

use clap::error::ErrorKind;
use clap::Parser;
use std::ffi::OsString;
use std::io::Write;

use config::{Cli, Command};
pub use error::CliError;

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = if code == 0 {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = command.flags().clone().resolve()?;
    match command {
        Command::Plug(_) => commands::plug(&cfg, out),
        Command::Invariants(_) => commands::invariants(&cfg, out),
        Command::Distinguish(_) => commands::distinguish_pairs(&cfg, out),
        Command::Plot(_) => commands::plot(&cfg, out),
        Command::OrbitSpace(_) => commands::orbit_space(&cfg, out),
    }
}
