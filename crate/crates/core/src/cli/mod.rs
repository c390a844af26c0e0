//! The `bve` command line: JSON in, JSON and CSV out.
//!
//! Exit codes: 0 pass, 1 quantitative failure, 2 usage or configuration
//! error.

mod commands;
pub mod config;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};

pub use output::{to_json, Fixed17};

#[derive(Debug, Parser)]
#[command(name = "bve", version, about = "Symmetry toolkit for the barotropic vorticity equation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Residual check of a family, lifted or perturbed field
    Verify(RunArgs),
    /// Reduce a one-dimensional subalgebra to its canonical representative
    Classify(RunArgs),
    /// Adjoint action by closed form, Lie series and ODE oracle
    Adjoint(RunArgs),
    /// Apply the flow of a generator to a solution, sample and verify it
    Transform(RunArgs),
    /// Sample a field on a grid as CSV
    Sample(RunArgs),
    /// Run the periodic β-plane model
    Simulate(RunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// JSON config file
    #[arg(long, conflicts_with = "json")]
    pub config: Option<PathBuf>,
    /// Inline JSON config
    #[arg(long)]
    pub json: Option<String>,
    /// Output directory for report.json and CSV files
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Tolerance override
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed for randomized sampling
    #[arg(long)]
    pub seed: Option<u64>,
    /// Grid override, `NX` or `NX,NY`
    #[arg(long, value_parser = parse_resolution)]
    pub resolution: Option<[usize; 2]>,
}

fn parse_resolution(text: &str) -> std::result::Result<[usize; 2], String> {
    let parts: Vec<&str> = text.split(',').collect();
    let num = |s: &str| s.trim().parse::<usize>().map_err(|e| format!("bad resolution `{text}`: {e}"));
    match parts.as_slice() {
        [n] => num(n).map(|n| [n, n]),
        [a, b] => Ok([num(a)?, num(b)?]),
        _ => Err(format!("resolution must be NX or NX,NY, got `{text}`")),
    }
}

impl RunArgs {
    /// The config text from `--config` or `--json`.
    pub fn config_text(&self) -> Result<String> {
        match (&self.config, &self.json) {
            (Some(path), None) => Ok(std::fs::read_to_string(path)?),
            (None, Some(text)) => Ok(text.clone()),
            _ => Err(Error::Config("pass exactly one of --config or --json".into())),
        }
    }

    pub fn parse<T: serde::de::DeserializeOwned>(&self) -> Result<T> {
        let text = self.config_text()?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("invalid config: {e}")))
    }
}

/// What a subcommand produced.
#[derive(Debug)]
pub struct Outcome {
    pub passed: bool,
    /// JSON report, printed to stdout and written as `report.json`.
    pub report: Option<String>,
    /// CSV files by name; printed to stdout when there is no report and no
    /// output directory.
    pub csv: Vec<(String, String)>,
    pub warnings: Vec<String>,
}

pub fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::Verify(args) => commands::verify(args),
        Command::Classify(args) => commands::classify(args),
        Command::Adjoint(args) => commands::adjoint(args),
        Command::Transform(args) => commands::transform(args),
        Command::Sample(args) => commands::sample(args),
        Command::Simulate(args) => commands::simulate(args),
    }
}

fn out_dir(command: &Command) -> Option<&PathBuf> {
    match command {
        Command::Verify(a)
        | Command::Classify(a)
        | Command::Adjoint(a)
        | Command::Transform(a)
        | Command::Sample(a)
        | Command::Simulate(a) => a.out.as_ref(),
    }
}

fn emit(command: &Command, outcome: &Outcome) -> Result<()> {
    for warning in &outcome.warnings {
        eprintln!("warning: {warning}");
    }
    if let Some(dir) = out_dir(command) {
        std::fs::create_dir_all(dir)?;
        if let Some(report) = &outcome.report {
            std::fs::write(dir.join("report.json"), report)?;
        }
        for (name, body) in &outcome.csv {
            std::fs::write(dir.join(name), body)?;
        }
    }
    if let Some(report) = &outcome.report {
        print!("{report}");
    } else if out_dir(command).is_none() {
        for (_, body) in &outcome.csv {
            print!("{body}");
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli.command).and_then(|outcome| emit(&cli.command, &outcome).map(|_| outcome.passed)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
