//! Terminal payoff series for plotting call-option payoff diagrams.

use serde::{Deserialize, Serialize};

use super::PricingError;

/// One point of a payoff diagram.
///
/// `payoff` is the intrinsic value `max(S_T - X, 0)`, less the premium when
/// the series was built in net mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffPoint {
    pub terminal_price: f64,
    pub payoff: f64,
}

/// Builds an evenly spaced payoff series over `[s_min, s_max]`.
///
/// The first and last points land exactly on `s_min` and `s_max`. With a
/// premium the series is net of the price paid (long-call P&L at expiry);
/// without one it is the gross intrinsic payoff.
pub fn payoff_series(
    strike: f64,
    premium: Option<f64>,
    s_min: f64,
    s_max: f64,
    n_points: usize,
) -> Result<Vec<PayoffPoint>, PricingError> {
    if !strike.is_finite() {
        return Err(PricingError::NonFinite {
            field: "strike",
            value: strike,
        });
    }
    if strike <= 0.0 {
        return Err(PricingError::NonPositive {
            field: "strike",
            value: strike,
        });
    }
    if let Some(p) = premium {
        if !p.is_finite() {
            return Err(PricingError::NonFinite {
                field: "premium",
                value: p,
            });
        }
        if p < 0.0 {
            return Err(PricingError::NegativePremium { value: p });
        }
    }
    if !s_min.is_finite() || !s_max.is_finite() || s_min < 0.0 || s_min >= s_max {
        return Err(PricingError::InvalidPayoffRange { s_min, s_max });
    }
    if n_points < 2 {
        return Err(PricingError::TooFewPayoffPoints { n_points });
    }

    let premium = premium.unwrap_or(0.0);
    let span = s_max - s_min;
    let last = n_points - 1;
    let points = (0..n_points)
        .map(|i| {
            let terminal_price = if i == 0 {
                s_min
            } else if i == last {
                s_max
            } else {
                s_min + span * (i as f64) / (last as f64)
            };
            PayoffPoint {
                terminal_price,
                payoff: (terminal_price - strike).max(0.0) - premium,
            }
        })
        .collect();
    Ok(points)
}
