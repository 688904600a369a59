//! `kv replay` — tape replay with deviation statistics.

use clap::Args;
use std::path::PathBuf;
use std::process::ExitCode;

use kv_core::harness::{load_tape, replay_tape};

use crate::error::{CliError, STATUS_FAILURES};
use crate::output::{cdf_mode, CdfChoice, Format, PiChoice};

#[derive(Args)]
pub struct ReplayArgs {
    /// Tape CSV to replay.
    #[arg(long)]
    tape: PathBuf,
    /// CDF evaluation path.
    #[arg(long, value_enum, default_value_t = CdfChoice::Reference)]
    cdf: CdfChoice,
    /// Pi constant for the polynomial path.
    #[arg(long, value_enum, default_value_t = PiChoice::Full)]
    pi: PiChoice,
    /// Fail (exit 1) when any |model - observed| exceeds this threshold.
    #[arg(long)]
    max_dev: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

pub fn run(args: ReplayArgs) -> Result<ExitCode, CliError> {
    let tape = load_tape(&args.tape)?;
    let stats = replay_tape(&tape, cdf_mode(args.cdf, args.pi))?;
    match args.format {
        Format::Table => print!("{}", stats.render_table()),
        Format::Records => print!("{}", stats.render_records(&tape)),
    }
    if let Some(threshold) = args.max_dev {
        if !(threshold >= 0.0) {
            return Err(CliError::usage(format!(
                "--max-dev must be >= 0 (got {threshold})"
            )));
        }
        if let Some(deviations) = &stats.deviations {
            if deviations.max_abs > threshold {
                eprintln!(
                    "max |deviation| {:.6e} exceeds --max-dev {threshold:.6e}",
                    deviations.max_abs
                );
                return Ok(ExitCode::from(STATUS_FAILURES));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
