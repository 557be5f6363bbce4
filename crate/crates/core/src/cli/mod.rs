//! Command-line front end of the `nhse` binary.
//!
//! Each subcommand reads one JSON config, writes CSV data files into the
//! output directory and finishes with `manifest.json`, which records the
//! resolved parameters, tool version, timestamps and a SHA-256 digest of the
//! config and of every data file.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 config error, 3 numerical
//! failure, 4 partial sweep (some points flagged).

mod commands;
pub mod config;
mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use commands::{cmd_gbz, cmd_phase_diagram, cmd_spectrum, cmd_walk};
pub use output::{sha256_hex, FileRecord, RunManifest};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] crate::Error),
    #[error("{failed} of {total} sweep points failed")]
    Partial { failed: usize, total: usize },
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Partial { .. } => 4,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "nhse", version, about = "Skin-effect reversal in coupled non-reciprocal chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON config file.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads; defaults to the available cores.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// OBC eigenvalues, PBC band loops and optional mode profiles.
    Spectrum(CommonArgs),
    /// Parameter sweep of localization observables.
    PhaseDiagram(CommonArgs),
    /// Quantum-walk dynamics, x̄ grids, quasi-energy windings, two-cell table.
    Walk(CommonArgs),
    /// First-order GBZ predictions and boundary curves.
    Gbz(CommonArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::PhaseDiagram(_) => "phase-diagram",
            Command::Walk(_) => "walk",
            Command::Gbz(_) => "gbz",
        }
    }

    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Spectrum(a) | Command::PhaseDiagram(a) | Command::Walk(a) | Command::Gbz(a) => a,
        }
    }
}

/// Runs one subcommand and returns the manifest it wrote.
pub fn run(command: &Command) -> Result<RunManifest, CliError> {
    let args = command.args();
    let jobs = match args.jobs {
        Some(0) => return Err(CliError::Config("--jobs must be at least 1".into())),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Io(e.to_string()))?;
    pool.install(|| match command {
        Command::Spectrum(a) => cmd_spectrum(&a.config, &a.out),
        Command::PhaseDiagram(a) => cmd_phase_diagram(&a.config, &a.out),
        Command::Walk(a) => cmd_walk(&a.config, &a.out),
        Command::Gbz(a) => cmd_gbz(&a.config, &a.out),
    })
}

/// Entry point shared by the binary: parses `args`, runs, reports, and
/// returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli.command) {
        Ok(m) => {
            println!(
                "{}: wrote {} files to {}",
                cli.command.name(),
                m.files.len() + 1,
                cli.command.args().out.display()
            );
            0
        }
        Err(e) => {
            eprintln!("nhse {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}

pub(crate) fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}
