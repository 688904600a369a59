//! Regression equivalence machinery: golden-file tests against stored
//! expected values, dual-path tests of the polynomial CDF against the
//! reference, and timestamped tape replay with deviation statistics.

pub mod dual;
pub mod golden;
pub mod report;
pub mod tape;

pub use dual::{
    run_dual_path_regression, run_dual_path_with_modes, sample_random_inputs, DualPathSource,
};
pub use golden::{
    load_golden, parse_golden, run_golden_regression, FieldCheck, GoldenCase, GoldenExpectation,
    GOLDEN_HEADER,
};
pub use report::{CaseResult, FieldResult, PriceField, RegressionReport, ReportMode};
pub use tape::{
    load_tape, parse_tape, replay_tape, DeviationStats, ReplayStats, Tape, TapeRecord, TAPE_HEADER,
};

/// Errors from harness loading and execution.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}: {reason}")]
    Parse { line: u64, reason: String },
    #[error("no cases to run")]
    NoCases,
    #[error("tape is empty")]
    EmptyTape,
    #[error("tape record {index}: timestamp decreases")]
    TapeOrder { index: usize },
    #[error("tape record {index}: {reason}")]
    TapeRecord { index: usize, reason: String },
    #[error("tolerance must be > 0 and finite (got {value})")]
    NonPositiveTolerance { value: f64 },
}
