//! Adaptive rejection sampling for log-concave densities on `(lo, hi)`.
//!
//! Tangent-line upper hull with chord squeeze. `hi` may be `+∞`, in which
//! case the right-most abscissa must have negative slope; `lo` must be finite.

use super::{sampling::open_unit, Real, RngStream};
use crate::error::{Error, Result};

const MAX_POINTS: usize = 64;
const MAX_TRIALS: usize = 100_000;

/// Log-density and its derivative at a point.
pub trait LogConcave<T> {
    fn eval(&self, x: T) -> (T, T);
}

impl<T, F: Fn(T) -> (T, T)> LogConcave<T> for F {
    fn eval(&self, x: T) -> (T, T) {
        self(x)
    }
}

#[derive(Debug, Clone, Copy)]
struct Knot<T> {
    x: T,
    h: T,
    dh: T,
}

/// Sampler state; the hull tightens as draws are made.
#[derive(Debug, Clone)]
pub struct AdaptiveRejection<T, F> {
    density: F,
    lo: T,
    hi: T,
    knots: Vec<Knot<T>>,
    // hull breakpoints z_0 = lo < z_1 < ... < z_k = hi
    z: Vec<T>,
    // log mass of each hull piece, and the running maximum
    log_mass: Vec<T>,
}

impl<T: Real, F: LogConcave<T>> AdaptiveRejection<T, F> {
    /// Builds the hull from `init` abscissae (sorted and deduplicated here).
    pub fn new(density: F, lo: T, hi: T, init: &[T]) -> Result<Self> {
        if !lo.is_finite() || !(lo < hi) {
            return Err(Error::domain(
                "AdaptiveRejection::new",
                format!("support ({lo}, {hi})"),
            ));
        }
        let mut xs: Vec<T> = init
            .iter()
            .copied()
            .filter(|&x| x > lo && x < hi && x.is_finite())
            .collect();
        xs.sort_by(|a, b| a.partial_cmp(b).expect("finite abscissae"));
        xs.dedup();
        if xs.len() < 2 {
            return Err(Error::domain(
                "AdaptiveRejection::new",
                "need two interior abscissae",
            ));
        }
        let mut knots = Vec::with_capacity(MAX_POINTS);
        for x in xs {
            let (h, dh) = density.eval(x);
            if !h.is_finite() || !dh.is_finite() {
                return Err(Error::domain(
                    "AdaptiveRejection::new",
                    format!("log-density not finite at {x}"),
                ));
            }
            knots.push(Knot { x, h, dh });
        }
        if hi == T::infinity() && !(knots.last().expect("nonempty").dh < T::zero()) {
            return Err(Error::domain(
                "AdaptiveRejection::new",
                "right-most abscissa must have negative slope on an unbounded support",
            ));
        }
        let mut s = Self {
            density,
            lo,
            hi,
            knots,
            z: Vec::new(),
            log_mass: Vec::new(),
        };
        s.rebuild();
        Ok(s)
    }

    fn rebuild(&mut self) {
        let k = self.knots.len();
        self.z.clear();
        self.z.push(self.lo);
        for j in 0..k - 1 {
            let (a, b) = (self.knots[j], self.knots[j + 1]);
            let ds = a.dh - b.dh;
            let mut z = if ds > T::epsilon() * (a.dh.abs() + b.dh.abs() + T::one()) {
                (b.h - a.h - b.x * b.dh + a.x * a.dh) / ds
            } else {
                (a.x + b.x) * T::c(0.5)
            };
            if !(z >= a.x && z <= b.x) {
                z = (a.x + b.x) * T::c(0.5);
            }
            self.z.push(z);
        }
        self.z.push(self.hi);
        self.log_mass = (0..k).map(|j| self.piece_log_mass(j)).collect();
    }

    fn piece_log_mass(&self, j: usize) -> T {
        let kn = self.knots[j];
        let (a, b) = (self.z[j], self.z[j + 1]);
        let s = kn.dh;
        let ua = kn.h + s * (a - kn.x);
        if b == T::infinity() {
            // s < 0 is guaranteed for the last piece on unbounded support
            return ua - (-s).ln();
        }
        let ub = kn.h + s * (b - kn.x);
        let width = b - a;
        if (s * width).abs() < T::c(1e-8) {
            return (ua + ub) * T::c(0.5) + width.ln();
        }
        if s > T::zero() {
            ub + (-(-(ub - ua)).exp_m1()).ln() - s.ln()
        } else {
            ua + (-(ub - ua).exp_m1()).ln() - (-s).ln()
        }
    }

    fn hull(&self, j: usize, x: T) -> T {
        let kn = self.knots[j];
        kn.h + kn.dh * (x - kn.x)
    }

    fn squeeze(&self, x: T) -> T {
        let k = self.knots.len();
        if x < self.knots[0].x || x > self.knots[k - 1].x {
            return T::neg_infinity();
        }
        let i = self.knots.partition_point(|kn| kn.x <= x).clamp(1, k - 1);
        let (a, b) = (self.knots[i - 1], self.knots[i]);
        a.h + (b.h - a.h) * (x - a.x) / (b.x - a.x)
    }

    fn draw_from_hull(&self, rng: &mut RngStream) -> (usize, T) {
        let m = self
            .log_mass
            .iter()
            .copied()
            .fold(T::neg_infinity(), T::max);
        let weights: Vec<T> = self.log_mass.iter().map(|&l| (l - m).exp()).collect();
        let total: T = weights.iter().copied().sum();
        let mut u = open_unit::<T>(rng) * total;
        let mut j = weights.len() - 1;
        for (i, &w) in weights.iter().enumerate() {
            if u < w {
                j = i;
                break;
            }
            u = u - w;
        }
        let s = self.knots[j].dh;
        let (a, b) = (self.z[j], self.z[j + 1]);
        let v = open_unit::<T>(rng);
        let x = if b == T::infinity() {
            a + (T::one() - v).ln() / s
        } else if (s * (b - a)).abs() < T::c(1e-8) {
            a + v * (b - a)
        } else {
            a + (v * (s * (b - a)).exp_m1()).ln_1p() / s
        };
        (j, x.max(a).min(b))
    }

    fn insert(&mut self, x: T, h: T, dh: T) {
        if self.knots.len() >= MAX_POINTS || !h.is_finite() || !dh.is_finite() {
            return;
        }
        let i = self.knots.partition_point(|kn| kn.x < x);
        if self.knots.get(i).is_some_and(|kn| kn.x == x) {
            return;
        }
        self.knots.insert(i, Knot { x, h, dh });
        self.rebuild();
    }

    /// One exact draw from the normalized density.
    pub fn sample(&mut self, rng: &mut RngStream) -> Result<T> {
        for _ in 0..MAX_TRIALS {
            let (j, x) = self.draw_from_hull(rng);
            let u = self.hull(j, x);
            let ln_w = open_unit::<T>(rng).ln();
            if ln_w <= self.squeeze(x) - u {
                return Ok(x);
            }
            let (h, dh) = self.density.eval(x);
            self.insert(x, h, dh);
            if ln_w <= h - u {
                return Ok(x);
            }
        }
        Err(Error::Convergence {
            func: "AdaptiveRejection::sample",
            detail: format!("no acceptance in {MAX_TRIALS} trials"),
        })
    }
}

/// Mode of a log-concave density on `(0, ∞)` and a curvature-based scale.
///
/// Brackets the zero of the derivative by doubling/halving from `start`, then
/// bisects; the scale is `1/√(−h'')` estimated by a central difference.
pub fn positive_mode<T: Real, F: LogConcave<T>>(density: &F, start: T) -> Result<(T, T)> {
    let slope = |x: T| density.eval(x).1;
    let mut lo = start;
    let mut hi = start;
    let mut guard = 0;
    while slope(lo) <= T::zero() {
        lo = lo * T::c(0.5);
        guard += 1;
        if guard > 200 {
            // density decreasing on the whole support; the mode is at 0
            let x = start * T::c(0.5).powi(200);
            return Ok((x, start));
        }
    }
    guard = 0;
    while slope(hi) >= T::zero() {
        hi = hi * T::c(2.0);
        guard += 1;
        if guard > 200 {
            return Err(Error::Convergence {
                func: "positive_mode",
                detail: "slope never turns negative".into(),
            });
        }
    }
    for _ in 0..200 {
        let mid = (lo + hi) * T::c(0.5);
        if mid <= lo || mid >= hi || hi - lo < T::c(1e-9) * hi {
            break;
        }
        if slope(mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mode = (lo + hi) * T::c(0.5);
    let eps = mode * T::c(1e-4);
    let curv = (slope(mode + eps) - slope(mode - eps)) / (eps + eps);
    let scale = if curv < T::zero() && curv.is_finite() {
        (-curv).sqrt().recip()
    } else {
        mode
    };
    Ok((mode, scale))
}

/// Five abscissae around the mode of a density on `(0, ∞)`, all positive,
/// the right-most one past the mode.
pub fn abscissae_around_mode<T: Real>(mode: T, scale: T) -> [T; 5] {
    let mut out = [T::zero(); 5];
    for (i, k) in [-2.0, -1.0, 0.0, 1.0, 2.0].iter().enumerate() {
        let x = mode + T::c(*k) * scale;
        out[i] = if x > T::zero() {
            x
        } else {
            mode * T::c(0.5).powi(3 - i as i32)
        };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_shape_moments() {
        // log density of gamma(3, 2)
        let f = |x: f64| (2.0 * x.ln() - 2.0 * x, 2.0 / x - 2.0);
        let (mode, scale) = positive_mode(&f, 1.0).unwrap();
        assert!((mode - 1.0).abs() < 1e-9);
        let init = abscissae_around_mode(mode, scale);
        let mut ars = AdaptiveRejection::new(f, 0.0, f64::INFINITY, &init).unwrap();
        let mut rng = RngStream::new(5, 0);
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| ars.sample(&mut rng).unwrap()).collect();
        let m = xs.iter().sum::<f64>() / n as f64;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        let se = (0.75f64 / n as f64).sqrt();
        assert!((m - 1.5).abs() < 4.0 * se, "mean {m}");
        assert!((v - 0.75).abs() < 0.02, "var {v}");
    }

    #[test]
    fn bounded_support_uniform_like() {
        // truncated exponential on (0, 1) with rate 1
        let f = |x: f64| (-x, -1.0);
        let mut ars = AdaptiveRejection::new(f, 0.0, 1.0, &[0.25, 0.75]).unwrap();
        let mut rng = RngStream::new(6, 0);
        let n = 100_000;
        let m = (0..n).map(|_| ars.sample(&mut rng).unwrap()).sum::<f64>() / n as f64;
        let exact = 1.0 - (-1.0f64).exp() * 1.0 / (1.0 - (-1.0f64).exp());
        assert!((m - exact).abs() < 0.005, "mean {m} vs {exact}");
    }

    #[test]
    fn rejects_bad_setup() {
        let f = |x: f64| (-x, -1.0);
        assert!(AdaptiveRejection::new(f, 0.0, 1.0, &[0.5]).is_err());
        let g = |x: f64| (x.ln(), 1.0 / x);
        assert!(AdaptiveRejection::new(g, 0.0, f64::INFINITY, &[1.0, 2.0]).is_err());
    }
}
