//! Standard normal CDF evaluation paths.
//!
//! Two interchangeable evaluators are provided:
//!
//! * [`normal_cdf_reference`] — erfc-based, absolute error below 1e-12.
//!   This is the in-repo ground truth that plays the role a spreadsheet
//!   built-in (`NORMSDIST`) plays for a prototype.
//! * [`normal_cdf_polynomial`] — the three-term Abramowitz-Stegun-style
//!   polynomial with a reflection branch for negative arguments. Family
//!   error is about 1e-5; the measured maximum over `[-6, 6]` is asserted
//!   to stay below 1e-4 by the test suite.

use serde::{Deserialize, Serialize};

use super::PricingError;

/// Which value of pi the polynomial path uses.
///
/// The original listing hard-codes `3.1415926`. `FullPrecision` is the
/// default; `PaperLiteral` reproduces the listing bit-for-bit so its
/// published outputs stay reproducible. The two differ by less than
/// 5e-9 in CDF output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PiMode {
    PaperLiteral,
    #[default]
    FullPrecision,
}

/// Selects the CDF evaluation path for a pricing call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CdfMode {
    #[default]
    Reference,
    Polynomial {
        pi_mode: PiMode,
    },
}

impl CdfMode {
    /// Polynomial path with full-precision pi (the recommended variant).
    pub fn polynomial() -> Self {
        CdfMode::Polynomial {
            pi_mode: PiMode::FullPrecision,
        }
    }

    /// Polynomial path with the literal pi constant from the original listing.
    pub fn polynomial_paper_pi() -> Self {
        CdfMode::Polynomial {
            pi_mode: PiMode::PaperLiteral,
        }
    }
}

impl std::fmt::Display for CdfMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CdfMode::Reference => write!(f, "reference"),
            CdfMode::Polynomial {
                pi_mode: PiMode::FullPrecision,
            } => write!(f, "polynomial(pi=full)"),
            CdfMode::Polynomial {
                pi_mode: PiMode::PaperLiteral,
            } => write!(f, "polynomial(pi=paper)"),
        }
    }
}

/// Coefficients of the polynomial CDF approximation.
///
/// `d = 1 / (1 + kappa * |x|)` is the auxiliary variable; the tail weight is
/// `a*d + b*d^2 + c*d^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfPolyConstants {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub kappa: f64,
}

/// The fixed coefficient set used by [`normal_cdf_polynomial`].
pub const CDF_POLY_CONSTANTS: CdfPolyConstants = CdfPolyConstants {
    a: 0.4361836,
    b: -0.1201676,
    c: 0.937298,
    kappa: 0.33267,
};

/// The literal pi constant used by [`PiMode::PaperLiteral`].
pub const PI_LITERAL: f64 = 3.1415926;

/// High-accuracy standard normal CDF.
///
/// Evaluates `Phi(x) = erfc(-x / sqrt(2)) / 2`. The erfc route avoids the
/// cancellation that `0.5 * (1 + erf(..))` suffers for large negative `x`,
/// keeping absolute error below 1e-12 everywhere (validated against an
/// adaptive-quadrature oracle in the test suite).
pub fn normal_cdf_reference(x: f64) -> Result<f64, PricingError> {
    if !x.is_finite() {
        return Err(PricingError::NonFinite { field: "x", value: x });
    }
    Ok(cdf_reference_raw(x))
}

/// Polynomial standard normal CDF, mirroring the original listing:
/// the tail weight is computed at `|x|` and negative arguments are handled
/// by the reflection `1 - prob`.
///
/// The raw formula value is returned unclamped; range containment on
/// `[-6, 6]` is a verified property, not an enforced one.
pub fn normal_cdf_polynomial(x: f64, pi_mode: PiMode) -> Result<f64, PricingError> {
    if !x.is_finite() {
        return Err(PricingError::NonFinite { field: "x", value: x });
    }
    Ok(cdf_polynomial_raw(x, pi_mode))
}

pub(crate) fn cdf_reference_raw(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

pub(crate) fn cdf_polynomial_raw(x: f64, pi_mode: PiMode) -> f64 {
    let pi = match pi_mode {
        PiMode::PaperLiteral => PI_LITERAL,
        PiMode::FullPrecision => std::f64::consts::PI,
    };
    let k = CDF_POLY_CONSTANTS;
    let d = 1.0 / (1.0 + k.kappa * x.abs());
    // Same operation order as the listing: coefficient * pdf * tail weight.
    let prob =
        1.0 - 1.0 / (2.0 * pi).sqrt() * (-0.5 * x * x).exp() * (k.a * d + k.b * d * d + k.c * d * d * d);
    if x < 0.0 {
        1.0 - prob
    } else {
        prob
    }
}

/// Dispatch helper used by the pricing assembly. Tolerates infinite
/// arguments (overflowed `d1`/`d2` from extreme-but-valid inputs) by
/// saturating to the mathematical limits 0 and 1.
pub(crate) fn eval_cdf(x: f64, mode: CdfMode) -> f64 {
    match mode {
        CdfMode::Reference => cdf_reference_raw(x),
        CdfMode::Polynomial { pi_mode } => cdf_polynomial_raw(x, pi_mode),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_match_the_published_listing() {
        assert_eq!(CDF_POLY_CONSTANTS.a, 0.4361836);
        assert_eq!(CDF_POLY_CONSTANTS.b, -0.1201676);
        assert_eq!(CDF_POLY_CONSTANTS.c, 0.937298);
        assert_eq!(CDF_POLY_CONSTANTS.kappa, 0.33267);
        assert_eq!(PI_LITERAL, 3.1415926);
    }

    #[test]
    fn reference_rejects_non_finite() {
        assert!(matches!(
            normal_cdf_reference(f64::NAN),
            Err(PricingError::NonFinite { field: "x", .. })
        ));
        assert!(normal_cdf_reference(f64::INFINITY).is_err());
        assert!(normal_cdf_reference(f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn polynomial_rejects_non_finite() {
        assert!(normal_cdf_polynomial(f64::NAN, PiMode::FullPrecision).is_err());
        assert!(normal_cdf_polynomial(f64::INFINITY, PiMode::PaperLiteral).is_err());
    }

    #[test]
    fn reference_at_zero_is_exactly_half() {
        assert_eq!(normal_cdf_reference(0.0).unwrap(), 0.5);
    }

    #[test]
    fn saturating_eval_handles_infinities() {
        assert_eq!(eval_cdf(f64::INFINITY, CdfMode::Reference), 1.0);
        assert_eq!(eval_cdf(f64::NEG_INFINITY, CdfMode::Reference), 0.0);
        assert_eq!(eval_cdf(f64::INFINITY, CdfMode::polynomial()), 1.0);
        assert_eq!(eval_cdf(f64::NEG_INFINITY, CdfMode::polynomial()), 0.0);
    }

    #[test]
    fn mode_display_is_stable() {
        assert_eq!(CdfMode::Reference.to_string(), "reference");
        assert_eq!(CdfMode::polynomial().to_string(), "polynomial(pi=full)");
        assert_eq!(CdfMode::polynomial_paper_pi().to_string(), "polynomial(pi=paper)");
    }
}
