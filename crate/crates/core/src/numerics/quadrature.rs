//! Adaptive Gauss–Kronrod (7/15) quadrature.

use super::Real;
use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 2_000;

fn kronrod<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = T::c(0.5);
    let center = (a + b) * half;
    let h = (b - a) * half;
    let fc = f(center);
    let mut k = fc * T::c(WGK[7]);
    let mut g = fc * T::c(WG[3]);
    for j in 0..7 {
        let dx = h * T::c(XGK[j]);
        let s = f(center - dx) + f(center + dx);
        k = k + s * T::c(WGK[j]);
        if j % 2 == 1 {
            g = g + s * T::c(WG[j / 2]);
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// ∫ₐᵇ f(x) dx to absolute tolerance `abs_tol`.
///
/// Intervals are bisected greedily on the largest error estimate.
pub fn integrate<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, abs_tol: T) -> Result<T> {
    if a == b {
        return Ok(T::zero());
    }
    if b < a {
        return integrate(f, b, a, abs_tol).map(|v| -v);
    }
    let (v, e) = kronrod(&mut f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    let mut total = v;
    let mut err = e;
    while err > abs_tol {
        if pieces.len() >= MAX_INTERVALS {
            return Err(Error::Convergence {
                func: "integrate",
                detail: format!("error estimate {err} above tolerance {abs_tol} on [{a}, {b}]"),
            });
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |best, (i, p)| {
                if p.3 > best.1 {
                    (i, p.3)
                } else {
                    best
                }
            });
        let (lo, hi, pv, _) = pieces.swap_remove(idx);
        let mid = (lo + hi) * T::c(0.5);
        if mid <= lo || mid >= hi {
            // interval at machine resolution; accept what we have
            pieces.push((lo, hi, pv, T::zero()));
            err = pieces.iter().map(|p| p.3).sum();
            continue;
        }
        let (lv, le) = kronrod(&mut f, lo, mid);
        let (rv, re) = kronrod(&mut f, mid, hi);
        pieces.push((lo, mid, lv, le));
        pieces.push((mid, hi, rv, re));
        total = pieces.iter().map(|p| p.2).sum();
        err = pieces.iter().map(|p| p.3).sum();
    }
    Ok(total)
}

/// Integral over `[a, ∞)` through the map x = a + t / (1 − t).
pub fn integrate_to_infinity<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, abs_tol: T) -> Result<T> {
    let one = T::one();
    integrate(
        |t: T| {
            if t >= one {
                return T::zero();
            }
            let u = one - t;
            let v = f(a + t / u) / (u * u);
            if v.is_finite() {
                v
            } else {
                T::zero()
            }
        },
        T::zero(),
        one,
        abs_tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x: f64| 3.0 * x * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 8.0).abs() < 1e-12);
    }

    #[test]
    fn peaked_integrand() {
        let v = integrate(|x: f64| (-(x - 0.3).powi(2) / 2e-4).exp(), 0.0, 1.0, 1e-12).unwrap();
        let want = (2.0 * std::f64::consts::PI * 1e-4).sqrt();
        assert!((v - want).abs() < 1e-10);
    }

    #[test]
    fn semi_infinite() {
        let v = integrate_to_infinity(|x: f64| (-x).exp(), 0.0, 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
        let v = integrate(|x: f64| x.sqrt(), 1.0, 0.0, 1e-10).unwrap();
        assert!((v + 2.0 / 3.0).abs() < 1e-9);
    }
}
