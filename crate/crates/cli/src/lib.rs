//! Command-line front end: parses a [`RunConfig`], dispatches to the matching
//! library operation and renders the result as JSON or CSV.

mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use gapbound_core::Error;

pub use config::{Command, Format, Options, RunConfig};
pub use output::{render, round_sig, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

/// Exit status for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NonConvergence(_)
        | Error::NonBracketing { .. }
        | Error::Cfl(_)
        | Error::NonPositiveOscillation { .. } => EXIT_NONCONVERGENCE,
        _ => EXIT_INVALID,
    }
}

/// Computes the report for an already parsed configuration.
pub fn execute(config: &RunConfig) -> Result<Report, Error> {
    commands::execute(config)
}

/// Runs one invocation. The report goes to `--out` or `stdout`, diagnostics to
/// `stderr`; the return value is the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_args(argv) {
        Ok(config) => config,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_INVALID
                }
            };
        }
    };
    let report = match execute(&config) {
        Ok(report) => report,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let text = match render(&report, config.options.format) {
        Ok(text) => text,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_IO;
        }
    };
    let written = match &config.options.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_IO
        }
    }
}
