//! Evenly spaced parameter grids with exactly representable landmarks.

/// `lo, lo + step, ..., hi` (inclusive when `hi` is a whole number of steps away).
///
/// Points are rounded to twelve decimals so that values such as `0`, `0.5`
/// and the endpoints come out exact instead of carrying accumulated
/// round-off from repeated addition.
pub fn parameter_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0 && hi >= lo, "invalid grid [{lo}, {hi}] step {step}");
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=count)
        .map(|k| {
            let x = lo + k as f64 * step;
            ((x * 1e12).round() / 1e12).clamp(lo, hi)
        })
        .collect()
}
