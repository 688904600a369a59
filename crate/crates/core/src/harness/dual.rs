//! Dual-path regression: the polynomial CDF path priced against the
//! reference path over stored cases or a seeded random sample.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::pricing::{black_scholes_call, CdfMode, PricingInputs};

use super::golden::GoldenCase;
use super::report::{CaseResult, FieldResult, PriceField, RegressionReport, ReportMode};
use super::HarnessError;

/// Input source for a dual-path run.
#[derive(Debug, Clone)]
pub enum DualPathSource<'a> {
    /// Reuse the inputs of stored golden cases (their expectations are ignored).
    Cases(&'a [GoldenCase]),
    /// A seeded random sample; the seed lands in the report so failures
    /// reproduce.
    Random { count: usize, seed: u64 },
}

/// Sampling ranges for random dual-path inputs. Spot and strike stay at or
/// below 100 so the error-propagation bound `(S + X) * eps_cdf` keeps the
/// price difference inside the documented 5e-3 envelope.
pub const RANDOM_SPOT_RANGE: (f64, f64) = (0.01, 100.0);
pub const RANDOM_STRIKE_RANGE: (f64, f64) = (0.01, 100.0);
pub const RANDOM_TIME_RANGE: (f64, f64) = (1e-4, 30.0);
pub const RANDOM_RATE_RANGE: (f64, f64) = (-0.05, 0.25);
pub const RANDOM_SIGMA_RANGE: (f64, f64) = (1e-4, 2.0);

/// Prices every input under `Reference` and `Polynomial(FullPrecision)` and
/// passes cases whose price difference stays within `tolerance`.
pub fn run_dual_path_regression(
    source: DualPathSource<'_>,
    tolerance: f64,
) -> Result<RegressionReport, HarnessError> {
    run_dual_path_with_modes(source, tolerance, CdfMode::Reference, CdfMode::polynomial())
}

/// Generalized dual-path run over two arbitrary CDF modes. The first mode
/// plays the "expected" role in the report.
pub fn run_dual_path_with_modes(
    source: DualPathSource<'_>,
    tolerance: f64,
    expected_mode: CdfMode,
    observed_mode: CdfMode,
) -> Result<RegressionReport, HarnessError> {
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(HarnessError::NonPositiveTolerance { value: tolerance });
    }

    let (inputs, mode) = match source {
        DualPathSource::Cases(cases) => {
            if cases.is_empty() {
                return Err(HarnessError::NoCases);
            }
            let inputs: Vec<(String, PricingInputs)> = cases
                .iter()
                .map(|c| (c.case_id.clone(), c.inputs.clone()))
                .collect();
            (
                inputs,
                ReportMode::DualPath {
                    tolerance,
                    seed: None,
                    sample_size: None,
                },
            )
        }
        DualPathSource::Random { count, seed } => {
            if count == 0 {
                return Err(HarnessError::NoCases);
            }
            (
                sample_random_inputs(count, seed),
                ReportMode::DualPath {
                    tolerance,
                    seed: Some(seed),
                    sample_size: Some(count),
                },
            )
        }
    };

    let results = inputs
        .iter()
        .map(|(case_id, input)| {
            let pair = black_scholes_call(input, expected_mode)
                .and_then(|left| black_scholes_call(input, observed_mode).map(|right| (left, right)));
            match pair {
                Ok((left, right)) => CaseResult::from_fields(
                    case_id,
                    vec![FieldResult::compare(
                        PriceField::CallPrice,
                        left.call_price,
                        right.call_price,
                        tolerance,
                    )],
                ),
                Err(e) => CaseResult::errored(case_id, e.to_string()),
            }
        })
        .collect();

    Ok(RegressionReport::new(mode, results))
}

/// Draws valid pricing inputs uniformly from the documented ranges.
pub fn sample_random_inputs(count: usize, seed: u64) -> Vec<(String, PricingInputs)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (1..=count)
        .map(|i| {
            let inputs = PricingInputs {
                ticker: format!("rand-{i:06}"),
                spot: rng.random_range(RANDOM_SPOT_RANGE.0..=RANDOM_SPOT_RANGE.1),
                strike: rng.random_range(RANDOM_STRIKE_RANGE.0..=RANDOM_STRIKE_RANGE.1),
                time_to_expiration: rng.random_range(RANDOM_TIME_RANGE.0..=RANDOM_TIME_RANGE.1),
                interest_rate: rng.random_range(RANDOM_RATE_RANGE.0..=RANDOM_RATE_RANGE.1),
                sigma: rng.random_range(RANDOM_SIGMA_RANGE.0..=RANDOM_SIGMA_RANGE.1),
            };
            (format!("rand-{i:06}"), inputs)
        })
        .collect()
}
