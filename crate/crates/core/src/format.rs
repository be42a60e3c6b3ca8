//! Number formatting shared by every CSV writer.

/// Scientific notation with 17 significant digits, enough to round-trip an `f64`.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}
