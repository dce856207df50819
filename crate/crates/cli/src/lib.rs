//! Command-line front end: argument parsing, command dispatch and report
//! rendering. The binary in `main.rs` only forwards to [`run`].
//!
//! Exit statuses: 0 success, 1 invalid input or usage, 2 the algorithm
//! could not complete, 3 a result disagrees with the reference data.

use std::ffi::OsString;

use clap::Parser;
use thiserror::Error;

pub mod args;
pub mod commands;
pub mod report;

use args::{Cli, Command};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot access {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] egth::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use egth::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Core(e) => match e {
                E::AbsorbingLastState { .. }
                | E::SingularPivot { .. }
                | E::Reducible
                | E::DimensionMismatch { .. }
                | E::LevelOutOfRange { .. } => 2,
                _ => 1,
            },
        }
    }
}

/// Everything a caller needs to reproduce one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub stdout: String,
    pub stderr: String,
    pub status: i32,
}

pub fn run<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if status == 0 {
                Invocation { stdout: text, stderr: String::new(), status }
            } else {
                Invocation { stdout: String::new(), stderr: text, status }
            };
        }
    };
    let result = match &cli.command {
        Command::Stationary(a) => commands::run(a, false),
        Command::Mfpt(a) => commands::run(a, true),
        Command::Verify(a) => commands::verify(a),
        Command::Compare(a) => commands::compare(a),
        Command::Corpus { action } => commands::corpus(action),
    };
    match result {
        Ok(out) => Invocation { stdout: out.stdout, stderr: String::new(), status: out.status },
        Err(e) => Invocation { stdout: String::new(), stderr: format!("error: {e}\n"), status: e.exit_code() },
    }
}
