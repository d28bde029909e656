use super::Design;
use crate::error::{Error, Result};
use crate::numerics::{binomial, log_gamma_unchecked, CompensatedSum, Real};

/// ln of the gamma density with shape `k` and rate 1/θ, or −∞ off support.
fn ln_gamma_density<T: Real>(z: T, k: u32, theta: T) -> T {
    if !(z > T::zero()) {
        return T::neg_infinity();
    }
    let k = T::of(k);
    (k - T::one()) * z.ln() - z / theta - k * theta.ln() - log_gamma_unchecked(k)
}

/// Probability of seeing no failure before T0, the mass of the atom at v = n·T0.
pub fn atom_mass<T: Real>(theta: T, design: &Design<T>) -> T {
    (-design.v_max() / theta).exp()
}

/// Joint law of (V, D) for exponential lifetimes with mean `theta`.
///
/// For `d ≥ 1` this is a density in `y`; for `d = 0` it is the point mass at
/// `y = n·T0` (and zero elsewhere).
pub fn joint_density<T: Real>(y: T, d: u32, theta: T, design: &Design<T>) -> Result<T> {
    design.validate()?;
    if !(theta > T::zero()) || !theta.is_finite() {
        return Err(Error::domain("joint_density", format!("theta = {theta}")));
    }
    if d > design.r {
        return Ok(T::zero());
    }
    let (n, r, t0) = (design.n, design.r, design.t0);
    let v_max = design.v_max();
    if d == 0 {
        return Ok(if y == v_max {
            atom_mass(theta, design)
        } else {
            T::zero()
        });
    }
    if !(y > T::zero()) || y > v_max {
        return Ok(T::zero());
    }
    let mut acc = CompensatedSum::new();
    if d < r {
        let lead: T = binomial(n, d);
        for i in 0..=d {
            let k = n - d + i;
            let shift = T::of(k) * t0;
            let lg = ln_gamma_density(y - shift, d, theta);
            if lg == T::neg_infinity() {
                continue;
            }
            let mag = lead * binomial::<T>(d, i) * (lg - shift / theta).exp();
            acc.add(if i % 2 == 0 { mag } else { -mag });
        }
    } else {
        acc.add(ln_gamma_density(y, r, theta).exp());
        let lead = T::of(r) * binomial::<T>(n, r);
        for k in 1..=r {
            let m = n - r + k;
            let shift = T::of(m) * t0;
            let lg = ln_gamma_density(y - shift, r, theta);
            if lg == T::neg_infinity() {
                continue;
            }
            let mag = lead * binomial::<T>(r - 1, k - 1) / T::of(m) * (lg - shift / theta).exp();
            acc.add(if k % 2 == 0 { mag } else { -mag });
        }
    }
    Ok(acc.value().max(T::zero()))
}
