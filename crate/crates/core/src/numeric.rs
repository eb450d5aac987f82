//! Floating-point comparison helpers shared by all algorithms.

/// Relative tolerance used for cost comparisons.
pub const REL_TOL: f64 = 1e-9;

#[inline]
pub fn approx_eq(a: f64, b: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs()).max(1.0)
}

/// `a < b` beyond the comparison tolerance.
#[inline]
pub fn definitely_less(a: f64, b: f64) -> bool {
    a < b && !approx_eq(a, b)
}

/// `a <= b` up to the comparison tolerance.
#[inline]
pub fn approx_le(a: f64, b: f64) -> bool {
    a <= b || approx_eq(a, b)
}
