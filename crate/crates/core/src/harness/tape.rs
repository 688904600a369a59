//! Timestamped input tapes and replay with deviation statistics.
//!
//! A tape is evidence: it must be wholly valid before anything is computed
//! from it, and replay aborts on the first bad record rather than emitting
//! partial statistics.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::pricing::{black_scholes_call, CdfMode, PricingInputs};

use super::HarnessError;

/// One captured pricing observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TapeRecord {
    pub timestamp: DateTime<Utc>,
    pub inputs: PricingInputs,
    /// Market-observed price, when one was captured alongside the inputs.
    pub observed_price: Option<f64>,
}

/// A nonempty, time-ordered sequence of tape records.
#[derive(Debug, Clone, PartialEq)]
pub struct Tape {
    records: Vec<TapeRecord>,
}

impl Tape {
    /// Validates and wraps records: nonempty, nondecreasing timestamps,
    /// kernel-valid inputs, nonnegative observed prices.
    pub fn new(records: Vec<TapeRecord>) -> Result<Tape, HarnessError> {
        if records.is_empty() {
            return Err(HarnessError::EmptyTape);
        }
        for (index, record) in records.iter().enumerate() {
            if index > 0 && record.timestamp < records[index - 1].timestamp {
                return Err(HarnessError::TapeOrder { index });
            }
            validate_record(record, index)?;
        }
        Ok(Tape { records })
    }

    pub fn records(&self) -> &[TapeRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

fn validate_record(record: &TapeRecord, index: usize) -> Result<(), HarnessError> {
    record
        .inputs
        .validate()
        .map_err(|e| HarnessError::TapeRecord {
            index,
            reason: e.to_string(),
        })?;
    if let Some(observed) = record.observed_price {
        if !observed.is_finite() || observed < 0.0 {
            return Err(HarnessError::TapeRecord {
                index,
                reason: format!("observed_price must be finite and >= 0 (got {observed})"),
            });
        }
    }
    Ok(())
}

/// Exact header the tape CSV format requires.
pub const TAPE_HEADER: [&str; 8] = [
    "timestamp", "ticker", "S", "X", "T", "r", "sigma", "observed_price",
];

/// Loads a tape from a CSV file.
pub fn load_tape(path: impl AsRef<Path>) -> Result<Tape, HarnessError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_tape(file)
}

/// Parses a tape from any CSV reader.
pub fn parse_tape(reader: impl Read) -> Result<Tape, HarnessError> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = csv_reader
        .headers()
        .map_err(|e| HarnessError::Parse {
            line: 1,
            reason: e.to_string(),
        })?
        .clone();
    if headers.iter().ne(TAPE_HEADER) {
        return Err(HarnessError::Parse {
            line: 1,
            reason: format!("header must be exactly `{}`", TAPE_HEADER.join(",")),
        });
    }

    let mut records = Vec::new();
    for record in csv_reader.records() {
        let record = record.map_err(|e| HarnessError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            reason: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        records.push(parse_tape_row(&record, line)?);
    }
    Tape::new(records)
}

fn parse_tape_row(record: &csv::StringRecord, line: u64) -> Result<TapeRecord, HarnessError> {
    let parse_err = |reason: String| HarnessError::Parse { line, reason };
    if record.len() != TAPE_HEADER.len() {
        return Err(parse_err(format!(
            "expected {} fields, found {}",
            TAPE_HEADER.len(),
            record.len()
        )));
    }
    let timestamp = DateTime::parse_from_rfc3339(&record[0])
        .map_err(|e| parse_err(format!("timestamp: {e}")))?
        .with_timezone(&Utc);
    let number = |idx: usize| -> Result<f64, HarnessError> {
        let raw = &record[idx];
        let value: f64 = raw
            .parse()
            .map_err(|_| parse_err(format!("{}: not a number: `{raw}`", TAPE_HEADER[idx])))?;
        if !value.is_finite() {
            return Err(parse_err(format!(
                "{}: must be finite (got {value})",
                TAPE_HEADER[idx]
            )));
        }
        Ok(value)
    };
    let observed_price = if record[7].is_empty() {
        None
    } else {
        Some(number(7)?)
    };
    Ok(TapeRecord {
        timestamp,
        inputs: PricingInputs {
            ticker: record[1].to_string(),
            spot: number(2)?,
            strike: number(3)?,
            time_to_expiration: number(4)?,
            interest_rate: number(5)?,
            sigma: number(6)?,
        },
        observed_price,
    })
}

/// Mean / population standard deviation / max absolute value of a signed
/// deviation series (model minus observed).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationStats {
    pub count: usize,
    pub mean: f64,
    pub stddev: f64,
    pub max_abs: f64,
}

impl DeviationStats {
    fn from_series(deviations: &[f64]) -> Option<DeviationStats> {
        if deviations.is_empty() {
            return None;
        }
        let n = deviations.len() as f64;
        let mean = deviations.iter().sum::<f64>() / n;
        let variance = deviations.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / n;
        let max_abs = deviations.iter().fold(0.0f64, |acc, d| acc.max(d.abs()));
        Some(DeviationStats {
            count: deviations.len(),
            mean,
            stddev: variance.sqrt(),
            max_abs,
        })
    }
}

/// Result of replaying one tape through the pricing kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayStats {
    pub cdf_mode: CdfMode,
    pub records_processed: usize,
    /// Model price per record, in input order.
    pub model_prices: Vec<f64>,
    /// Deviation statistics over records carrying an observed price.
    pub deviations: Option<DeviationStats>,
    /// Per-ticker deviation breakdown (observed-carrying records only).
    pub per_ticker: BTreeMap<String, DeviationStats>,
}

/// Replays a tape in record order. Any invalid record aborts the replay
/// with its index.
pub fn replay_tape(tape: &Tape, mode: CdfMode) -> Result<ReplayStats, HarnessError> {
    let mut model_prices = Vec::with_capacity(tape.len());
    let mut deviations = Vec::new();
    let mut per_ticker: BTreeMap<String, Vec<f64>> = BTreeMap::new();

    for (index, record) in tape.records().iter().enumerate() {
        validate_record(record, index)?;
        let breakdown =
            black_scholes_call(&record.inputs, mode).map_err(|e| HarnessError::TapeRecord {
                index,
                reason: e.to_string(),
            })?;
        model_prices.push(breakdown.call_price);
        if let Some(observed) = record.observed_price {
            let deviation = breakdown.call_price - observed;
            deviations.push(deviation);
            per_ticker
                .entry(record.inputs.ticker.clone())
                .or_default()
                .push(deviation);
        }
    }

    Ok(ReplayStats {
        cdf_mode: mode,
        records_processed: tape.len(),
        model_prices,
        deviations: DeviationStats::from_series(&deviations),
        per_ticker: per_ticker
            .into_iter()
            .map(|(ticker, series)| {
                let stats = DeviationStats::from_series(&series)
                    .expect("per-ticker series are nonempty by construction");
                (ticker, stats)
            })
            .collect(),
    })
}

impl ReplayStats {
    /// Human-readable summary table.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "Tape replay: {} records, cdf={}\n",
            self.records_processed, self.cdf_mode
        ));
        match &self.deviations {
            Some(stats) => {
                out.push_str(&format!(
                    "deviations (model - observed): n={} mean={:.6e} stddev={:.6e} max|dev|={:.6e}\n",
                    stats.count, stats.mean, stats.stddev, stats.max_abs
                ));
                for (ticker, stats) in &self.per_ticker {
                    out.push_str(&format!(
                        "  {:<10} n={} mean={:.6e} stddev={:.6e} max|dev|={:.6e}\n",
                        ticker, stats.count, stats.mean, stats.stddev, stats.max_abs
                    ));
                }
            }
            None => out.push_str("no observed prices on tape; no deviation statistics\n"),
        }
        out
    }

    /// One JSON line per replayed record, in input order.
    pub fn render_records(&self, tape: &Tape) -> String {
        let mut out = String::new();
        for (index, (record, price)) in tape.records().iter().zip(&self.model_prices).enumerate() {
            let line = serde_json::json!({
                "index": index,
                "timestamp": record.timestamp,
                "ticker": record.inputs.ticker,
                "model_price": price,
                "observed_price": record.observed_price,
                "deviation": record.observed_price.map(|o| price - o),
            });
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out
    }
}
