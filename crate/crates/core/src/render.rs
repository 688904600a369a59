//! Display rounding for numeric text output.
//!
//! Table-format output rounds half away from zero at the documented number
//! of decimal places; machine-record output always carries full precision.

/// Rounds to `decimals` places with ties going away from zero
/// (2.5 -> 3, -2.5 -> -3), unlike the half-even rounding `format!` applies.
pub fn round_half_away(value: f64, decimals: u32) -> f64 {
    if !value.is_finite() {
        return value;
    }
    let scale = 10f64.powi(decimals as i32);
    let scaled = value * scale;
    let rounded = if scaled >= 0.0 {
        (scaled + 0.5).floor()
    } else {
        (scaled - 0.5).ceil()
    };
    let result = rounded / scale;
    // Avoid "-0.00" in rendered output.
    if result == 0.0 {
        0.0
    } else {
        result
    }
}

/// Fixed-point rendering of [`round_half_away`].
pub fn format_fixed(value: f64, decimals: usize) -> String {
    format!("{:.*}", decimals, round_half_away(value, decimals as u32))
}
