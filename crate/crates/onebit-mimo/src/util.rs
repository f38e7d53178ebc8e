//! Small shared helpers.

/// Formats a float with 17 significant digits, enough to round-trip any f64.
pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
