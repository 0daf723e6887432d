//! `critrefl`: roots, amplitudes, fields and exponent reports for
//! near-critical reflection sweeps.
//!
//! Exit codes: 0 pass, 2 tolerance failure, 3 numerical error, 4 config error.

mod commands;
mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use config::{parse_list, ConfigError, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Numerical(#[from] critrefl_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 4,
            CliError::Numerical(_) | CliError::Io { .. } => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "critrefl",
    version,
    about = "Approximate near-critical reflection: roots, amplitudes, fields, exponent reports"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Flat `key = value` run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides `out`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (overrides `threads`; 0 uses every core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Comma-separated ε list (overrides `eps`).
    #[arg(long, global = true)]
    eps: Option<String>,
    /// Write the physical (real) field instead of the complex lobe sum.
    #[arg(long, global = true)]
    real_part: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The six roots with families and decay flags, per ε and k node.
    Roots,
    /// det M, amplitudes and |B₅| per ε, with exponent fits.
    Solve,
    /// Incident, boundary-layer and approximate fields on grids.
    Field,
    /// Every table for the matrix; exit 2 on any failing row.
    Verify,
    /// Every table for the configured (case, β).
    Report,
}

fn load(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            RunConfig::parse(&text).map_err(|e: ConfigError| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    if let Some(n) = cli.threads {
        cfg.threads = n;
    }
    if let Some(list) = &cli.eps {
        cfg.eps = parse_list(list).map_err(|e| CliError::Config(format!("--eps: {e}")))?;
    }
    cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<commands::Outcome, CliError> {
    let cfg = load(cli)?;
    if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("threads: {e}")))?;
    }
    match cli.command {
        Command::Roots => commands::roots(&cfg),
        Command::Solve => commands::solve(&cfg),
        Command::Field => commands::field(&cfg, cli.real_part),
        Command::Verify => commands::verify(&cfg),
        Command::Report => commands::report(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            for f in &out.files {
                println!("{}", f.display());
            }
            print!("{}", out.summary);
            ExitCode::from(if out.passed { 0 } else { 2 })
        }
        Err(e) => {
            eprintln!("critrefl: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
