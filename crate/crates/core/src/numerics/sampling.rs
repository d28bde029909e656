use rand::Rng;
use rand_distr::{Distribution, Gamma};

use super::{Real, RngStream};
use crate::error::{Error, Result};

/// Draw from the gamma law with density ∝ y^{shape-1} e^{-rate·y}.
pub fn sample_gamma<T: Real>(shape: T, rate: T, rng: &mut RngStream) -> Result<T> {
    if !(shape > T::zero() && rate > T::zero()) || !shape.is_finite() || !rate.is_finite() {
        return Err(Error::domain(
            "sample_gamma",
            format!("shape = {shape}, rate = {rate}"),
        ));
    }
    let g = Gamma::new(shape.to_f64_lossy(), 1.0 / rate.to_f64_lossy())
        .map_err(|e| Error::domain("sample_gamma", e.to_string()))?;
    Ok(T::c(g.sample(rng)))
}

/// Draw from the inverse gamma law with density ∝ θ^{-shape-1} e^{-scale/θ}.
pub fn sample_inverse_gamma<T: Real>(shape: T, scale: T, rng: &mut RngStream) -> Result<T> {
    if !(shape > T::zero() && scale > T::zero()) || !shape.is_finite() || !scale.is_finite() {
        return Err(Error::domain(
            "sample_inverse_gamma",
            format!("shape = {shape}, scale = {scale}"),
        ));
    }
    Ok(T::one() / sample_gamma(shape, scale, rng)?)
}

/// Uniform draw on the open interval (0, 1).
pub fn open_unit<T: Real>(rng: &mut RngStream) -> T {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return T::c(u);
        }
    }
}

/// Uniform draw on `[lo, hi]`; a degenerate interval returns `lo`.
pub fn uniform<T: Real>(lo: T, hi: T, rng: &mut RngStream) -> T {
    if hi <= lo {
        return lo;
    }
    let u: f64 = rng.random();
    lo + (hi - lo) * T::c(u)
}
