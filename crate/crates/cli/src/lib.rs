//! Command-line front end for the cross-Kerr QND detector model.
//!
//! Each subcommand is a pure function in [`commands`] returning a
//! serializable report; [`run`] handles configuration merging and output.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::config::{Format, Settings};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("infeasible design: {0}")]
    Infeasible(#[from] qnd_core::QndError),
    #[error("oracle check failed in {failed} of {total} cells")]
    OracleFailure { failed: usize, total: usize },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::OracleFailure { .. } => 4,
            CliError::Io(_) | CliError::Output(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qnd", version, about = "Cross-Kerr QND photon-number detector design and checks")]
pub struct Cli {
    /// Flat TOML file of settings; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub settings: Settings,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Solve the minimum-resource operating point.
    Design,
    /// Tabulate N_min against theta_max for several error probabilities.
    #[command(name = "sweep-fig4")]
    SweepFig4,
    /// Simulate homodyne shots and compare with the Gaussian-tail prediction.
    Montecarlo,
    /// Compare truncated-Fock moments with the analytic readout.
    OracleCheck,
    /// Vacuum Rabi frequency of a material.
    Rabi,
}

impl Command {
    fn default_format(self) -> Format {
        match self {
            Command::SweepFig4 | Command::OracleCheck => Format::Csv,
            _ => Format::Structured,
        }
    }
}

pub fn resolve_settings(cli: &Cli) -> Result<Settings, CliError> {
    let file = match &cli.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    Ok(cli.settings.clone().over(file))
}

/// Runs a parsed invocation, writing its report to `--out` or stdout.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let settings = resolve_settings(cli)?;
    let format = settings.format.unwrap_or(cli.command.default_format());
    let out = settings.out.as_deref();
    match cli.command {
        Command::Design => {
            let report = commands::design(&settings)?;
            report.warnings.iter().for_each(|w| eprintln!("warning: {w}"));
            output::emit_record(&report, format, out)
        }
        Command::SweepFig4 => output::emit_table(&commands::sweep_fig4(&settings)?, format, out),
        Command::Montecarlo => output::emit_record(&commands::montecarlo(&settings)?, format, out),
        Command::OracleCheck => {
            let cells = commands::oracle_check(&settings)?;
            output::emit_table(&cells, format, out)?;
            let failed = cells.iter().filter(|c| !c.pass).count();
            let worst = cells.iter().map(|c| c.max_deviation()).fold(0.0, f64::max);
            eprintln!("oracle-check: {} cells, {failed} failed, max moment deviation {worst:.3e}", cells.len());
            if failed > 0 {
                return Err(CliError::OracleFailure { failed, total: cells.len() });
            }
            Ok(())
        }
        Command::Rabi => {
            let report = commands::rabi(&settings)?;
            report.summary.warnings.iter().for_each(|w| eprintln!("warning: {w}"));
            output::emit_record(&report, format, out)
        }
    }
}
