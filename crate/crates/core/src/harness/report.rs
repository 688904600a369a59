//! Regression report assembly and rendering.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::pricing::{CdfMode, PriceBreakdown};

/// The six numeric fields a golden case may assert.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriceField {
    D1,
    D2,
    ND1,
    ND2,
    DiscountFactor,
    CallPrice,
}

impl PriceField {
    pub const ALL: [PriceField; 6] = [
        PriceField::D1,
        PriceField::D2,
        PriceField::ND1,
        PriceField::ND2,
        PriceField::DiscountFactor,
        PriceField::CallPrice,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PriceField::D1 => "d1",
            PriceField::D2 => "d2",
            PriceField::ND1 => "n_d1",
            PriceField::ND2 => "n_d2",
            PriceField::DiscountFactor => "discount_factor",
            PriceField::CallPrice => "call_price",
        }
    }

    pub fn extract(self, breakdown: &PriceBreakdown) -> f64 {
        match self {
            PriceField::D1 => breakdown.d1,
            PriceField::D2 => breakdown.d2,
            PriceField::ND1 => breakdown.n_d1,
            PriceField::ND2 => breakdown.n_d2,
            PriceField::DiscountFactor => breakdown.discount_factor,
            PriceField::CallPrice => breakdown.call_price,
        }
    }
}

impl std::fmt::Display for PriceField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// What produced a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ReportMode {
    /// Kernel outputs compared against stored expected values.
    GoldenExpected { cdf_mode: CdfMode },
    /// Reference-path prices compared against polynomial-path prices.
    DualPath {
        tolerance: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sample_size: Option<usize>,
    },
}

impl std::fmt::Display for ReportMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReportMode::GoldenExpected { cdf_mode } => {
                write!(f, "golden-expected (cdf={cdf_mode})")
            }
            ReportMode::DualPath {
                tolerance,
                seed,
                sample_size,
            } => {
                write!(f, "dual-path (tolerance={tolerance}")?;
                if let Some(seed) = seed {
                    write!(f, ", seed={seed}")?;
                }
                if let Some(n) = sample_size {
                    write!(f, ", n={n}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// One field comparison within a case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldResult {
    pub field: PriceField,
    pub expected: f64,
    /// Absent when the kernel errored before producing a value.
    pub observed: Option<f64>,
    pub abs_diff: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

impl FieldResult {
    /// Pass iff `|observed - expected| <= tolerance`; boundary equality passes.
    pub fn compare(field: PriceField, expected: f64, observed: f64, tolerance: f64) -> FieldResult {
        let abs_diff = (observed - expected).abs();
        FieldResult {
            field,
            expected,
            observed: Some(observed),
            abs_diff: Some(abs_diff),
            tolerance,
            pass: abs_diff <= tolerance,
        }
    }
}

/// Outcome of one case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub case_id: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub fields: Vec<FieldResult>,
}

impl CaseResult {
    pub fn from_fields(case_id: impl Into<String>, fields: Vec<FieldResult>) -> CaseResult {
        let passed = fields.iter().all(|f| f.pass);
        CaseResult {
            case_id: case_id.into(),
            passed,
            error: None,
            fields,
        }
    }

    pub fn errored(case_id: impl Into<String>, error: impl Into<String>) -> CaseResult {
        CaseResult {
            case_id: case_id.into(),
            passed: false,
            error: Some(error.into()),
            fields: Vec::new(),
        }
    }
}

/// Full regression report. Case order equals input order regardless of
/// evaluation order, so identical inputs render byte-identically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionReport {
    pub mode: ReportMode,
    pub cases: Vec<CaseResult>,
}

impl RegressionReport {
    pub fn new(mode: ReportMode, cases: Vec<CaseResult>) -> RegressionReport {
        RegressionReport { mode, cases }
    }

    pub fn cases_run(&self) -> usize {
        self.cases.len()
    }

    pub fn passed_count(&self) -> usize {
        self.cases.iter().filter(|c| c.passed).count()
    }

    pub fn failed_count(&self) -> usize {
        self.cases_run() - self.passed_count()
    }

    /// The suite passes iff no case failed.
    pub fn all_passed(&self) -> bool {
        self.failed_count() == 0
    }

    /// Largest observed |diff| per field across the suite.
    pub fn max_abs_diff_per_field(&self) -> BTreeMap<PriceField, f64> {
        let mut max: BTreeMap<PriceField, f64> = BTreeMap::new();
        for case in &self.cases {
            for field in &case.fields {
                if let Some(diff) = field.abs_diff {
                    let entry = max.entry(field.field).or_insert(0.0);
                    if diff > *entry {
                        *entry = diff;
                    }
                }
            }
        }
        max
    }

    /// Human-readable table.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("Regression report: {}\n", self.mode));
        for case in &self.cases {
            let status = if case.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("[{status}] {}\n", case.case_id));
            if let Some(error) = &case.error {
                out.push_str(&format!("       error: {error}\n"));
            }
            for field in &case.fields {
                let observed = field
                    .observed
                    .map_or("-".to_string(), |v| format!("{v:.9}"));
                let diff = field
                    .abs_diff
                    .map_or("-".to_string(), |v| format!("{v:.3e}"));
                out.push_str(&format!(
                    "       {:<16} expected {:<14.9} observed {:<14} |diff| {:<10} tol {:.3e} {}\n",
                    field.field.name(),
                    field.expected,
                    observed,
                    diff,
                    field.tolerance,
                    if field.pass { "ok" } else { "EXCEEDED" },
                ));
            }
        }
        for (field, diff) in self.max_abs_diff_per_field() {
            out.push_str(&format!("max |diff| {:<16} {:.6e}\n", field.name(), diff));
        }
        out.push_str(&format!(
            "{}/{} passed\n",
            self.passed_count(),
            self.cases_run()
        ));
        out
    }

    /// Machine-readable line-delimited records, one JSON object per case.
    pub fn render_records(&self) -> String {
        let mut out = String::new();
        for case in &self.cases {
            out.push_str(&serde_json::to_string(case).expect("case results serialize infallibly"));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_equality_passes() {
        let r = FieldResult::compare(PriceField::CallPrice, 4.76, 4.765, 0.005);
        assert!(r.pass);
        let r = FieldResult::compare(PriceField::CallPrice, 4.76, 4.7651, 0.005);
        assert!(!r.pass);
    }

    #[test]
    fn totals_reconcile() {
        let report = RegressionReport::new(
            ReportMode::GoldenExpected {
                cdf_mode: CdfMode::Reference,
            },
            vec![
                CaseResult::from_fields(
                    "a",
                    vec![FieldResult::compare(PriceField::D1, 1.0, 1.0, 0.1)],
                ),
                CaseResult::errored("b", "boom"),
            ],
        );
        assert_eq!(report.cases_run(), 2);
        assert_eq!(report.passed_count(), 1);
        assert_eq!(report.failed_count(), 1);
        assert!(!report.all_passed());
    }

    #[test]
    fn rendering_is_deterministic() {
        let report = RegressionReport::new(
            ReportMode::DualPath {
                tolerance: 5e-3,
                seed: Some(7),
                sample_size: Some(2),
            },
            vec![CaseResult::from_fields(
                "rand-000001",
                vec![FieldResult::compare(PriceField::CallPrice, 1.0, 1.0001, 5e-3)],
            )],
        );
        assert_eq!(report.render_table(), report.render_table());
        assert_eq!(report.render_records(), report.render_records());
        let line = report.render_records();
        let parsed: CaseResult = serde_json::from_str(line.trim()).unwrap();
        assert_eq!(parsed, report.cases[0]);
    }
}
