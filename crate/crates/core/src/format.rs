//! Fixed-precision number formatting shared by CSV and JSON output.

/// Scientific notation with 12 significant digits.
pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Rounds to 12 significant digits; non-finite values map to `None`.
pub fn round12(x: f64) -> Option<f64> {
    if !x.is_finite() {
        return None;
    }
    sig12(x).parse().ok()
}
