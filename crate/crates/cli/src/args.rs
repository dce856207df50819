use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use egth::Precision;

#[derive(Debug, Parser)]
#[command(
    name = "egth",
    version,
    about = "Stationary distributions and mean first passage times of Markov chains and Markov renewal processes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the stationary distribution.
    Stationary(RunArgs),
    /// Compute the matrix of mean first passage times.
    Mfpt(RunArgs),
    /// Check computed results against the shipped reference data.
    Verify(VerifyArgs),
    /// Compare single- and double-precision runs.
    Compare(CompareArgs),
    /// Inspect the bundled test problems.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Matrix document to read.
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Bundled test problem, e.g. TP1.
    #[arg(long, value_name = "ID")]
    pub corpus: Option<String>,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
    pub report: ReportFormat,
    /// Leave the generation time out of the report.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value = "double", value_parser = parse_precision)]
    pub precision: Precision,
    /// Defaults to gth for `stationary` and egth for `mfpt`.
    #[arg(long, value_enum)]
    pub algorithm: Option<Algorithm>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Test problem with reference data, or `all`.
    #[arg(long, value_name = "ID")]
    pub corpus: String,
    #[arg(long, value_enum, default_value_t = Algorithm::Egth)]
    pub algorithm: Algorithm,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// `--corpus all` compares every problem with reference data.
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Subcommand)]
pub enum CorpusAction {
    /// List the bundled problems.
    List {
        #[command(flatten)]
        output: Output,
    },
    /// Print a problem as a matrix document.
    Show { id: String },
    /// Write a problem as a matrix document.
    Export {
        id: String,
        /// Destination file; standard output when omitted.
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Egth,
    Theorem7,
    Closedform,
    Gth,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Egth => "egth",
            Algorithm::Theorem7 => "theorem7",
            Algorithm::Closedform => "closedform",
            Algorithm::Gth => "gth",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Table,
    Csv,
    Json,
}

fn parse_precision(s: &str) -> Result<Precision, String> {
    s.parse().map_err(|e: egth::Error| e.to_string())
}
