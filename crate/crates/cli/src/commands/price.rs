//! `kv price` — one call valuation, table or records output.

use clap::Args;
use std::process::ExitCode;

use kv_core::pricing::{black_scholes_call, discounted_intrinsic, PricingInputs};
use kv_core::render::format_fixed;

use crate::error::CliError;
use crate::output::{cdf_mode, print_rows, CdfChoice, Format, PiChoice};

#[derive(Args)]
pub struct PriceArgs {
    /// Spot price of the underlying (S).
    #[arg(allow_negative_numbers = true)]
    s: f64,
    /// Strike price (X).
    #[arg(allow_negative_numbers = true)]
    x: f64,
    /// Time to expiration in years (T).
    #[arg(allow_negative_numbers = true)]
    t: f64,
    /// Continuously-compounded annual interest rate (r).
    #[arg(allow_negative_numbers = true)]
    r: f64,
    /// Annualized volatility (sigma).
    #[arg(allow_negative_numbers = true)]
    sigma: f64,
    /// Ticker label for the output.
    #[arg(long, default_value = "OPT")]
    ticker: String,
    /// CDF evaluation path.
    #[arg(long, value_enum, default_value_t = CdfChoice::Reference)]
    cdf: CdfChoice,
    /// Pi constant for the polynomial path.
    #[arg(long, value_enum, default_value_t = PiChoice::Full)]
    pi: PiChoice,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Price the expiry/zero-volatility limit (requires T = 0 or sigma = 0).
    #[arg(long)]
    intrinsic: bool,
}

pub fn run(args: PriceArgs) -> Result<ExitCode, CliError> {
    if args.intrinsic {
        return run_intrinsic(&args);
    }

    let inputs = PricingInputs::new(&args.ticker, args.s, args.x, args.t, args.r, args.sigma)?;
    let mode = cdf_mode(args.cdf, args.pi);
    let breakdown = black_scholes_call(&inputs, mode)?;

    match args.format {
        Format::Table => {
            // 4 d.p. intermediates, 2 d.p. price; the call price is the
            // last row.
            print_rows(&[
                ("Ticker", inputs.ticker.clone()),
                ("S", args.s.to_string()),
                ("X", args.x.to_string()),
                ("T", args.t.to_string()),
                ("r", args.r.to_string()),
                ("sigma", args.sigma.to_string()),
                ("CDF Mode", mode.to_string()),
                ("d1", format_fixed(breakdown.d1, 4)),
                ("d2", format_fixed(breakdown.d2, 4)),
                ("N(d1)", format_fixed(breakdown.n_d1, 4)),
                ("N(d2)", format_fixed(breakdown.n_d2, 4)),
                ("Discount Factor", format_fixed(breakdown.discount_factor, 4)),
                ("Call Price", format_fixed(breakdown.call_price, 2)),
            ]);
        }
        Format::Records => {
            let record = serde_json::json!({
                "ticker": inputs.ticker,
                "spot": inputs.spot,
                "strike": inputs.strike,
                "time_to_expiration": inputs.time_to_expiration,
                "interest_rate": inputs.interest_rate,
                "sigma": inputs.sigma,
                "cdf_mode": breakdown.cdf_mode,
                "d1": breakdown.d1,
                "d2": breakdown.d2,
                "n_d1": breakdown.n_d1,
                "n_d2": breakdown.n_d2,
                "discount_factor": breakdown.discount_factor,
                "call_price": breakdown.call_price,
            });
            println!("{record}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_intrinsic(args: &PriceArgs) -> Result<ExitCode, CliError> {
    let value = discounted_intrinsic(args.s, args.x, args.t, args.r, args.sigma)?;
    match args.format {
        Format::Table => {
            print_rows(&[
                ("Ticker", args.ticker.clone()),
                ("S", args.s.to_string()),
                ("X", args.x.to_string()),
                ("T", args.t.to_string()),
                ("r", args.r.to_string()),
                ("sigma", args.sigma.to_string()),
                ("Intrinsic Value", format_fixed(value, 2)),
            ]);
        }
        Format::Records => {
            let record = serde_json::json!({
                "ticker": args.ticker,
                "spot": args.s,
                "strike": args.x,
                "time_to_expiration": args.t,
                "interest_rate": args.r,
                "sigma": args.sigma,
                "intrinsic_value": value,
            });
            println!("{record}");
        }
    }
    Ok(ExitCode::SUCCESS)
}
