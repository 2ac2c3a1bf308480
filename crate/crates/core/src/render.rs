//! Locale-independent float rendering for machine-readable output.

/// Renders with 17 significant digits in scientific notation, e.g.
/// `1.5707963267948966e0`. Byte-stable across platforms for finite inputs.
pub fn f64_sig17(x: f64) -> String {
    format!("{x:.16e}")
}
