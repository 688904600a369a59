//! Golden-file regression: stored inputs with expected values and
//! per-field absolute tolerances.

use std::io::Read;
use std::path::Path;

use crate::pricing::{black_scholes_call, CdfMode, PricingInputs};

use super::report::{CaseResult, FieldResult, PriceField, RegressionReport, ReportMode};
use super::HarnessError;

/// Expected value plus absolute tolerance for one field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldCheck {
    pub expected: f64,
    pub tolerance: f64,
}

/// The asserted subset of a price breakdown. Unset fields are not checked.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GoldenExpectation {
    pub d1: Option<FieldCheck>,
    pub d2: Option<FieldCheck>,
    pub n_d1: Option<FieldCheck>,
    pub n_d2: Option<FieldCheck>,
    pub discount_factor: Option<FieldCheck>,
    pub call_price: Option<FieldCheck>,
}

impl GoldenExpectation {
    pub fn checks(&self) -> impl Iterator<Item = (PriceField, FieldCheck)> + '_ {
        [
            (PriceField::D1, self.d1),
            (PriceField::D2, self.d2),
            (PriceField::ND1, self.n_d1),
            (PriceField::ND2, self.n_d2),
            (PriceField::DiscountFactor, self.discount_factor),
            (PriceField::CallPrice, self.call_price),
        ]
        .into_iter()
        .filter_map(|(field, check)| check.map(|c| (field, c)))
    }

    pub fn is_empty(&self) -> bool {
        self.checks().next().is_none()
    }
}

/// One stored regression fixture.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldenCase {
    pub case_id: String,
    pub inputs: PricingInputs,
    pub expectation: GoldenExpectation,
}

/// Exact header the golden CSV format requires.
pub const GOLDEN_HEADER: [&str; 18] = [
    "case_id", "S", "X", "T", "r", "sigma", "expect_d1", "expect_d2", "expect_nd1", "expect_nd2",
    "expect_discount", "expect_call", "tol_d1", "tol_d2", "tol_nd1", "tol_nd2", "tol_discount",
    "tol_call",
];

/// Loads golden cases from a CSV file.
pub fn load_golden(path: impl AsRef<Path>) -> Result<Vec<GoldenCase>, HarnessError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_golden(file)
}

/// Parses golden cases from any CSV reader. Structural invariants (header,
/// finite numerics, expected/tolerance pairing, positive tolerances, at
/// least one expected field) are enforced here; kernel-level input validity
/// is checked per case at run time so one bad row cannot sink the suite.
pub fn parse_golden(reader: impl Read) -> Result<Vec<GoldenCase>, HarnessError> {
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
    if headers.iter().ne(GOLDEN_HEADER) {
        return Err(HarnessError::Parse {
            line: 1,
            reason: format!(
                "header must be exactly `{}`",
                GOLDEN_HEADER.join(",")
            ),
        });
    }

    let mut cases = Vec::new();
    for record in csv_reader.records() {
        let record = record.map_err(|e| HarnessError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            reason: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        cases.push(parse_row(&record, line)?);
    }
    if cases.is_empty() {
        return Err(HarnessError::NoCases);
    }
    Ok(cases)
}

fn parse_row(record: &csv::StringRecord, line: u64) -> Result<GoldenCase, HarnessError> {
    let parse_err = |reason: String| HarnessError::Parse { line, reason };
    if record.len() != GOLDEN_HEADER.len() {
        return Err(parse_err(format!(
            "expected {} fields, found {}",
            GOLDEN_HEADER.len(),
            record.len()
        )));
    }

    let case_id = record[0].to_string();
    if case_id.is_empty() {
        return Err(parse_err("case_id must not be empty".to_string()));
    }

    let number = |idx: usize| -> Result<f64, HarnessError> {
        let raw = &record[idx];
        let value: f64 = raw.parse().map_err(|_| {
            parse_err(format!("{}: not a number: `{raw}`", GOLDEN_HEADER[idx]))
        })?;
        if !value.is_finite() {
            return Err(parse_err(format!(
                "{}: must be finite (got {value})",
                GOLDEN_HEADER[idx]
            )));
        }
        Ok(value)
    };

    let inputs = PricingInputs {
        ticker: case_id.clone(),
        spot: number(1)?,
        strike: number(2)?,
        time_to_expiration: number(3)?,
        interest_rate: number(4)?,
        sigma: number(5)?,
    };

    // Expected columns 6..=11 pair with tolerance columns 12..=17.
    let mut checks: [Option<FieldCheck>; 6] = Default::default();
    for i in 0..6 {
        let expected_raw = &record[6 + i];
        let tol_raw = &record[12 + i];
        match (expected_raw.is_empty(), tol_raw.is_empty()) {
            (true, true) => {}
            (false, false) => {
                let expected = number(6 + i)?;
                let tolerance = number(12 + i)?;
                if tolerance <= 0.0 {
                    return Err(parse_err(format!(
                        "{}: tolerance must be > 0 (got {tolerance})",
                        GOLDEN_HEADER[12 + i]
                    )));
                }
                checks[i] = Some(FieldCheck { expected, tolerance });
            }
            (true, false) => {
                return Err(parse_err(format!(
                    "{} set without {}",
                    GOLDEN_HEADER[12 + i],
                    GOLDEN_HEADER[6 + i]
                )));
            }
            (false, true) => {
                return Err(parse_err(format!(
                    "{} set without {}",
                    GOLDEN_HEADER[6 + i],
                    GOLDEN_HEADER[12 + i]
                )));
            }
        }
    }

    let expectation = GoldenExpectation {
        d1: checks[0],
        d2: checks[1],
        n_d1: checks[2],
        n_d2: checks[3],
        discount_factor: checks[4],
        call_price: checks[5],
    };
    if expectation.is_empty() {
        return Err(parse_err("row asserts no expected fields".to_string()));
    }

    Ok(GoldenCase {
        case_id,
        inputs,
        expectation,
    })
}

/// Runs every case against the kernel under `mode`. A case whose inputs the
/// kernel rejects is marked failed with the error; the rest of the suite
/// still runs.
pub fn run_golden_regression(
    cases: &[GoldenCase],
    mode: CdfMode,
) -> Result<RegressionReport, HarnessError> {
    if cases.is_empty() {
        return Err(HarnessError::NoCases);
    }
    let results = cases
        .iter()
        .map(|case| match black_scholes_call(&case.inputs, mode) {
            Ok(breakdown) => {
                let fields = case
                    .expectation
                    .checks()
                    .map(|(field, check)| {
                        FieldResult::compare(
                            field,
                            check.expected,
                            field.extract(&breakdown),
                            check.tolerance,
                        )
                    })
                    .collect();
                CaseResult::from_fields(&case.case_id, fields)
            }
            Err(e) => CaseResult::errored(&case.case_id, e.to_string()),
        })
        .collect();
    Ok(RegressionReport::new(
        ReportMode::GoldenExpected { cdf_mode: mode },
        results,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    const HULL_ROW: &str = "\
case_id,S,X,T,r,sigma,expect_d1,expect_d2,expect_nd1,expect_nd2,expect_discount,expect_call,tol_d1,tol_d2,tol_nd1,tol_nd2,tol_discount,tol_call
hull-call,42,40,0.5,0.10,0.20,0.7693,0.6278,0.7791,0.7349,38.049,4.76,0.0001,0.0001,0.0001,0.0001,0.001,0.005
";

    #[test]
    fn parses_the_hull_fixture() {
        let cases = parse_golden(HULL_ROW.as_bytes()).unwrap();
        assert_eq!(cases.len(), 1);
        let case = &cases[0];
        assert_eq!(case.case_id, "hull-call");
        assert_eq!(case.inputs.spot, 42.0);
        assert_eq!(
            case.expectation.call_price,
            Some(FieldCheck { expected: 4.76, tolerance: 0.005 })
        );
        assert_eq!(case.expectation.checks().count(), 6);
    }

    #[test]
    fn empty_file_reports_no_cases() {
        let header_only = HULL_ROW.lines().next().unwrap().to_string() + "\n";
        assert!(matches!(
            parse_golden(header_only.as_bytes()),
            Err(HarnessError::NoCases)
        ));
    }

    #[test]
    fn zero_tolerance_is_rejected_at_load() {
        let bad = HULL_ROW.replace(",0.005\n", ",0\n");
        match parse_golden(bad.as_bytes()) {
            Err(HarnessError::Parse { line: 2, reason }) => {
                assert!(reason.contains("tolerance must be > 0"), "{reason}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn tolerance_requires_matching_expected_cell() {
        let bad = HULL_ROW.replace("0.7693,", ",");
        assert!(matches!(bad.find("expect"), Some(_)));
        match parse_golden(bad.as_bytes()) {
            Err(HarnessError::Parse { line: 2, reason }) => {
                assert!(reason.contains("set without"), "{reason}");
            }
            other => panic!("expected pairing error, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_numerics_are_rejected_at_load() {
        let bad = HULL_ROW.replace("hull-call,42", "hull-call,NaN");
        assert!(matches!(
            parse_golden(bad.as_bytes()),
            Err(HarnessError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn wrong_header_is_rejected() {
        let bad = HULL_ROW.replace("case_id,", "id,");
        assert!(matches!(
            parse_golden(bad.as_bytes()),
            Err(HarnessError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn degenerate_case_fails_without_sinking_the_suite() {
        let two = HULL_ROW.to_string()
            + "degenerate,42,40,0.5,0.10,0,,,,,,3.95,,,,,,0.01\n";
        let cases = parse_golden(two.as_bytes()).unwrap();
        let report = run_golden_regression(&cases, CdfMode::Reference).unwrap();
        assert_eq!(report.cases_run(), 2);
        assert!(report.cases[0].passed);
        assert!(!report.cases[1].passed);
        let error = report.cases[1].error.as_deref().unwrap();
        assert!(error.contains("degenerate"), "{error}");
    }
}
