//! `osgt-dp`: sampling, accounting, calibration, figure data and self-test
//! for the OSGT mechanism.
//!
//! Exit codes: 0 success, 1 invalid input, 2 numerical or oracle failure.

mod commands;
mod output;
mod reproduce;
mod selftest;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use output::{Format, Table};

#[derive(Debug, Parser)]
#[command(name = "osgt-dp", version, about = "Offset-symmetric Gaussian tails mechanism toolkit")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Significant digits in printed numbers
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..=17))]
    precision: u64,
    /// RNG seed (ChaCha20); falls back to OSGT_DP_SEED, then 0
    #[arg(long, global = true, env = "OSGT_DP_SEED", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw OSGT variates, one per line
    Sample(commands::SampleArgs),
    /// Exact delta(eps) of the 1-D mechanism, with the matched Gaussian
    Delta(commands::DeltaArgs),
    /// zCDP parameters (zeta, rho) and the bound zeta + alpha rho
    Zcdp(commands::ZcdpArgs),
    /// Exact Renyi divergence between neighbouring outputs
    Renyi(commands::RenyiArgs),
    /// delta(eps) through the optimised Renyi conversion
    Convert(commands::ConvertArgs),
    /// Solve for eps or sigma^2 that meets a delta target
    Calibrate(commands::CalibrateArgs),
    /// Emit the data behind a figure
    Reproduce(reproduce::ReproduceArgs),
    /// Run the oracle-equivalence and invariant checks
    Selftest(selftest::SelftestArgs),
}

pub enum Body {
    Table(Table),
    Values(Vec<f64>),
}

/// Output plus any failed checks; failures still print the body first.
pub struct Report {
    body: Body,
    failures: Vec<String>,
}

impl Report {
    pub fn ok(body: Body) -> Self {
        Self { body, failures: Vec::new() }
    }

    pub fn checked(body: Body, failures: Vec<String>) -> Self {
        Self { body, failures }
    }
}

pub enum Failure {
    Input(String),
    Internal(String),
}

impl From<osgt_dp::Error> for Failure {
    fn from(e: osgt_dp::Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Sample(a) => commands::sample(a, cli.seed),
        Command::Delta(a) => commands::delta(a),
        Command::Zcdp(a) => commands::zcdp(a),
        Command::Renyi(a) => commands::renyi(a),
        Command::Convert(a) => commands::convert(a),
        Command::Calibrate(a) => commands::calibrate(a),
        Command::Reproduce(a) => reproduce::reproduce(a),
        Command::Selftest(a) => selftest::selftest(a, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let report = match dispatch(&cli) {
        Ok(r) => r,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };

    let digits = cli.precision as usize;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let written = match &report.body {
        Body::Table(t) => t.write(&mut out, cli.format, digits),
        Body::Values(v) => output::write_values(&mut out, v, cli.format, digits),
    };
    if let Err(e) = written.and_then(|_| out.flush()) {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return ExitCode::SUCCESS;
        }
        eprintln!("error: writing output: {e}");
        return ExitCode::from(2);
    }
    if report.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        for f in &report.failures {
            eprintln!("FAILED {f}");
        }
        ExitCode::from(2)
    }
}
