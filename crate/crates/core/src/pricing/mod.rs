//! Black-Scholes call pricing kernel.
//!
//! Pure, deterministic pricing of European calls on non-dividend stocks,
//! with two interchangeable normal-CDF paths (see [`cdf`]). All functions
//! are pure; values can be shared freely across threads.

pub mod cdf;
pub mod payoff;

use serde::{Deserialize, Serialize};

pub use cdf::{
    normal_cdf_polynomial, normal_cdf_reference, CdfMode, CdfPolyConstants, PiMode,
    CDF_POLY_CONSTANTS, PI_LITERAL,
};
pub use payoff::{payoff_series, PayoffPoint};

/// Errors from input validation and the pricing operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PricingError {
    #[error("{field} must be finite (got {value})")]
    NonFinite { field: &'static str, value: f64 },
    #[error("{field} must be positive (got {value})")]
    NonPositive { field: &'static str, value: f64 },
    #[error("degenerate input: {field} is zero; use discounted_intrinsic for the expiry/zero-volatility limit")]
    DegenerateInput { field: &'static str },
    #[error("inputs are not degenerate (sigma and time_to_expiration both positive); use black_scholes_call")]
    NotDegenerate,
    #[error("premium must be >= 0 (got {value})")]
    NegativePremium { value: f64 },
    #[error("payoff range must satisfy 0 <= min < max (got {s_min}..{s_max})")]
    InvalidPayoffRange { s_min: f64, s_max: f64 },
    #[error("payoff series needs at least 2 points (got {n_points})")]
    TooFewPayoffPoints { n_points: usize },
}

/// The five Black-Scholes inputs plus a ticker label.
///
/// Field validity (strictly positive spot/strike/time/sigma, finite rate) is
/// checked by [`PricingInputs::validate`], which every pricing operation
/// calls. Out-of-range data is rejected, never clamped: a bad feed should
/// surface as an error, not a silently adjusted price.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PricingInputs {
    pub ticker: String,
    /// Spot price of the underlying (S).
    pub spot: f64,
    /// Exercise price of the call (X).
    pub strike: f64,
    /// Time to expiration in years (T).
    pub time_to_expiration: f64,
    /// Annualized continuously-compounded interest rate (r); may be negative.
    pub interest_rate: f64,
    /// Annualized volatility (sigma).
    pub sigma: f64,
}

impl PricingInputs {
    /// Validating constructor.
    pub fn new(
        ticker: impl Into<String>,
        spot: f64,
        strike: f64,
        time_to_expiration: f64,
        interest_rate: f64,
        sigma: f64,
    ) -> Result<Self, PricingError> {
        let inputs = Self {
            ticker: ticker.into(),
            spot,
            strike,
            time_to_expiration,
            interest_rate,
            sigma,
        };
        inputs.validate()?;
        Ok(inputs)
    }

    /// Checks the type invariants, naming the offending field.
    ///
    /// Exact zeros of `sigma` or `time_to_expiration` are reported as
    /// degenerate (the limit served by [`discounted_intrinsic`]); negative
    /// values are plain range violations.
    pub fn validate(&self) -> Result<(), PricingError> {
        for (field, value) in [
            ("spot", self.spot),
            ("strike", self.strike),
            ("time_to_expiration", self.time_to_expiration),
            ("interest_rate", self.interest_rate),
            ("sigma", self.sigma),
        ] {
            if !value.is_finite() {
                return Err(PricingError::NonFinite { field, value });
            }
        }
        for (field, value) in [("spot", self.spot), ("strike", self.strike)] {
            if value <= 0.0 {
                return Err(PricingError::NonPositive { field, value });
            }
        }
        for (field, value) in [
            ("time_to_expiration", self.time_to_expiration),
            ("sigma", self.sigma),
        ] {
            if value == 0.0 {
                return Err(PricingError::DegenerateInput { field });
            }
            if value < 0.0 {
                return Err(PricingError::NonPositive { field, value });
            }
        }
        Ok(())
    }
}

/// Full decomposition of one Black-Scholes call valuation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceBreakdown {
    pub d1: f64,
    pub d2: f64,
    pub n_d1: f64,
    pub n_d2: f64,
    /// Present value of the strike, `X * exp(-r*T)`.
    pub discount_factor: f64,
    pub call_price: f64,
    pub cdf_mode: CdfMode,
}

fn d1_unchecked(inputs: &PricingInputs) -> Result<(f64, f64), PricingError> {
    let vol_sqrt_t = inputs.sigma * inputs.time_to_expiration.sqrt();
    if vol_sqrt_t == 0.0 {
        // sigma * sqrt(T) underflowed: volatility is zero at machine precision.
        return Err(PricingError::DegenerateInput { field: "sigma" });
    }
    let d1 = ((inputs.spot / inputs.strike).ln()
        + (inputs.interest_rate + inputs.sigma * inputs.sigma / 2.0) * inputs.time_to_expiration)
        / vol_sqrt_t;
    Ok((d1, vol_sqrt_t))
}

/// `d1 = (ln(S/X) + (r + sigma^2/2) T) / (sigma sqrt(T))`.
pub fn compute_d1(inputs: &PricingInputs) -> Result<f64, PricingError> {
    inputs.validate()?;
    Ok(d1_unchecked(inputs)?.0)
}

/// `d2 = d1 - sigma sqrt(T)`.
pub fn compute_d2(d1: f64, sigma: f64, time_to_expiration: f64) -> Result<f64, PricingError> {
    if !d1.is_finite() {
        return Err(PricingError::NonFinite { field: "d1", value: d1 });
    }
    for (field, value) in [("sigma", sigma), ("time_to_expiration", time_to_expiration)] {
        if !value.is_finite() {
            return Err(PricingError::NonFinite { field, value });
        }
        if value == 0.0 {
            return Err(PricingError::DegenerateInput { field });
        }
        if value < 0.0 {
            return Err(PricingError::NonPositive { field, value });
        }
    }
    Ok(d1 - sigma * time_to_expiration.sqrt())
}

/// Prices a European call, `C = S N(d1) - X e^{-rT} N(d2)`, under the
/// requested CDF mode and returns the full breakdown.
///
/// The assembled price is pinned to its no-arbitrage envelope
/// `max(S - X e^{-rT}, 0) <= C <= S`. The raw product form can leak past
/// either edge by a last-place rounding step when the CDFs saturate; the
/// envelope is part of the output contract, so it wins.
pub fn black_scholes_call(
    inputs: &PricingInputs,
    mode: CdfMode,
) -> Result<PriceBreakdown, PricingError> {
    inputs.validate()?;
    let (d1, vol_sqrt_t) = d1_unchecked(inputs)?;
    let d2 = d1 - vol_sqrt_t;
    let n_d1 = cdf::eval_cdf(d1, mode);
    let n_d2 = cdf::eval_cdf(d2, mode);
    let discount_factor =
        inputs.strike * (-inputs.interest_rate * inputs.time_to_expiration).exp();
    let raw = inputs.spot * n_d1 - discount_factor * n_d2;
    let call_price = raw
        .max(inputs.spot - discount_factor)
        .max(0.0)
        .min(inputs.spot);
    Ok(PriceBreakdown {
        d1,
        d2,
        n_d1,
        n_d2,
        discount_factor,
        call_price,
        cdf_mode: mode,
    })
}

/// Limit price for expired or zero-volatility calls.
///
/// Returns `max(S - X e^{-rT}, 0)` when `sigma == 0`, and the intrinsic
/// `max(S - X, 0)` when `T == 0`. Inputs where both `sigma` and `T` are
/// positive belong to [`black_scholes_call`] and are rejected, keeping the
/// two paths distinct.
pub fn discounted_intrinsic(
    spot: f64,
    strike: f64,
    time_to_expiration: f64,
    interest_rate: f64,
    sigma: f64,
) -> Result<f64, PricingError> {
    for (field, value) in [
        ("spot", spot),
        ("strike", strike),
        ("time_to_expiration", time_to_expiration),
        ("interest_rate", interest_rate),
        ("sigma", sigma),
    ] {
        if !value.is_finite() {
            return Err(PricingError::NonFinite { field, value });
        }
    }
    for (field, value) in [("spot", spot), ("strike", strike)] {
        if value <= 0.0 {
            return Err(PricingError::NonPositive { field, value });
        }
    }
    for (field, value) in [("time_to_expiration", time_to_expiration), ("sigma", sigma)] {
        if value < 0.0 {
            return Err(PricingError::NonPositive { field, value });
        }
    }
    if sigma > 0.0 && time_to_expiration > 0.0 {
        return Err(PricingError::NotDegenerate);
    }
    if time_to_expiration == 0.0 {
        Ok((spot - strike).max(0.0))
    } else {
        Ok((spot - strike * (-interest_rate * time_to_expiration).exp()).max(0.0))
    }
}
