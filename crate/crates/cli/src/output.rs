//! Shared output plumbing: format selection and label/value tables.

use clap::ValueEnum;
use kv_core::pricing::{CdfMode, PiMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Human-readable table at display precision.
    Table,
    /// Line-delimited JSON records at full precision.
    Records,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CdfChoice {
    Reference,
    Poly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PiChoice {
    Paper,
    Full,
}

pub fn cdf_mode(cdf: CdfChoice, pi: PiChoice) -> CdfMode {
    match (cdf, pi) {
        (CdfChoice::Reference, _) => CdfMode::Reference,
        (CdfChoice::Poly, PiChoice::Full) => CdfMode::Polynomial {
            pi_mode: PiMode::FullPrecision,
        },
        (CdfChoice::Poly, PiChoice::Paper) => CdfMode::Polynomial {
            pi_mode: PiMode::PaperLiteral,
        },
    }
}

/// Prints aligned label/value rows.
pub fn print_rows(rows: &[(&str, String)]) {
    let width = rows.iter().map(|(label, _)| label.len()).max().unwrap_or(0);
    for (label, value) in rows {
        println!("{label:<width$}  {value}");
    }
}
