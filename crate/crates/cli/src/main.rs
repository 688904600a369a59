//! `kv` — pricing, payoff emission, project lifecycle, regression suites,
//! and tape replay from one binary.
//!
//! Exit statuses: 0 success; 1 a suite ran to completion with failures;
//! 2 usage or input-format error; 3 invalid lifecycle transition;
//! 4 internal error (corrupt journal, lock contention in fail-fast mode,
//! I/O trouble).

use clap::{Parser, Subcommand};
use std::process::ExitCode;

mod commands;
mod error;
mod output;

use commands::{payoff, price, project, regress, replay};
use error::CliError;

#[derive(Parser)]
#[command(
    name = "kv",
    version,
    about = "Stage-gated trading-system workflow engine with a dual-path Black-Scholes pricing kernel"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Price a European call and print the full breakdown.
    Price(price::PriceArgs),
    /// Emit a payoff diagram as plot-ready two-column data.
    Payoff(payoff::PayoffArgs),
    /// Create and drive stage-gated projects backed by append-only journals.
    Project(project::ProjectArgs),
    /// Run golden-file or dual-path regression suites.
    Regress(regress::RegressArgs),
    /// Replay a recorded input tape and report deviation statistics.
    Replay(replay::ReplayArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Price(args) => price::run(args),
        Command::Payoff(args) => payoff::run(args),
        Command::Project(args) => project::run(args),
        Command::Regress(args) => regress::run(args),
        Command::Replay(args) => replay::run(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => err.exit(),
    }
}

impl CliError {
    fn exit(&self) -> ExitCode {
        eprintln!("error: {}", self.message);
        ExitCode::from(self.status)
    }
}
