//! Emits a synthetic replay tape on stdout: seeded random pricing inputs at
//! one-minute intervals, with observed prices generated by the reference
//! path so a reference-mode replay reproduces them exactly.
//!
//! Usage: cargo run -p kv-core --example synthetic_tape [N_RECORDS] [SEED]

use chrono::{TimeZone, Utc};
use kv_core::harness::sample_random_inputs;
use kv_core::pricing::{black_scholes_call, CdfMode};

fn main() {
    let mut args = std::env::args().skip(1);
    let count: usize = args
        .next()
        .map(|raw| raw.parse().expect("N_RECORDS must be an integer"))
        .unwrap_or(100);
    let seed: u64 = args
        .next()
        .map(|raw| raw.parse().expect("SEED must be an integer"))
        .unwrap_or(20260810);

    let tickers = ["IBM", "MSFT", "GOOG", "XOM", "GE"];
    let start = Utc.with_ymd_and_hms(2026, 1, 5, 14, 30, 0).unwrap();

    println!("timestamp,ticker,S,X,T,r,sigma,observed_price");
    for (i, (_, mut inputs)) in sample_random_inputs(count, seed).into_iter().enumerate() {
        inputs.ticker = tickers[i % tickers.len()].to_string();
        let observed = black_scholes_call(&inputs, CdfMode::Reference)
            .expect("sampled inputs are valid")
            .call_price;
        let timestamp = start + chrono::Duration::minutes(i as i64);
        println!(
            "{},{},{},{},{},{},{},{}",
            timestamp.format("%Y-%m-%dT%H:%M:%SZ"),
            inputs.ticker,
            inputs.spot,
            inputs.strike,
            inputs.time_to_expiration,
            inputs.interest_rate,
            inputs.sigma,
            observed,
        );
    }
}
