//! Number formatting shared by every text export.

/// Rounds to 12 significant digits; magnitudes below 1e-12 become zero.
pub fn round12(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        return 0.0;
    }
    let r: f64 = format!("{:.11e}", x).parse().unwrap_or(x);
    r + 0.0
}

/// Shortest decimal text of `round12(x)`.
pub fn fmt12(x: f64) -> String {
    format!("{}", round12(x))
}
