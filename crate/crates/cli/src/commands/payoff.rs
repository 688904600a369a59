//! `kv payoff` — payoff-diagram data emission.

use clap::Args;
use std::process::ExitCode;

use kv_core::pricing::payoff_series;

use crate::error::CliError;
use crate::output::Format;

#[derive(Args)]
pub struct PayoffArgs {
    /// Strike price (X).
    #[arg(allow_negative_numbers = true)]
    x: f64,
    /// Premium paid; when given, emits net payoff (intrinsic minus premium).
    #[arg(long, allow_negative_numbers = true)]
    premium: Option<f64>,
    /// Lowest terminal price.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    min: f64,
    /// Highest terminal price (default: twice the strike).
    #[arg(long, allow_negative_numbers = true)]
    max: Option<f64>,
    /// Number of evenly spaced points.
    #[arg(long, default_value_t = 41)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

pub fn run(args: PayoffArgs) -> Result<ExitCode, CliError> {
    let s_max = args.max.unwrap_or(args.x * 2.0);
    let series = payoff_series(args.x, args.premium, args.min, s_max, args.points)?;
    match args.format {
        Format::Table => {
            for point in &series {
                println!("{} {}", point.terminal_price, point.payoff);
            }
        }
        Format::Records => {
            for point in &series {
                println!(
                    "{}",
                    serde_json::json!({
                        "terminal_price": point.terminal_price,
                        "payoff": point.payoff,
                    })
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
