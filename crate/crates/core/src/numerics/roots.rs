use super::Real;
use crate::error::{Error, Result};

/// Bisection for a nonincreasing `f` on `[lo, hi]`.
///
/// Returns the crossing point to within `tol`. When `f` never changes sign the
/// result saturates: `hi` if `f > 0` everywhere, `lo` if `f < 0` everywhere.
pub fn find_root_decreasing<T: Real, F>(mut f: F, lo: T, hi: T, tol: T) -> Result<T>
where
    F: FnMut(T) -> T,
{
    if !(tol > T::zero()) {
        return Err(Error::domain(
            "find_root_decreasing",
            format!("tol = {tol} must be positive"),
        ));
    }
    if !(lo < hi) {
        return Err(Error::domain(
            "find_root_decreasing",
            format!("empty bracket [{lo}, {hi}]"),
        ));
    }
    let f_lo = f(lo);
    if f_lo <= T::zero() {
        return Ok(lo);
    }
    let f_hi = f(hi);
    if f_hi > T::zero() {
        return Ok(hi);
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > tol {
        let mid = a + (b - a) * T::c(0.5);
        if mid <= a || mid >= b {
            break;
        }
        if f(mid) > T::zero() {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(a + (b - a) * T::c(0.5))
}
