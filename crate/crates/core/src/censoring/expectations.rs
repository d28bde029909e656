use super::Design;
use crate::error::{Error, Result};
use crate::lifetime::Lifetime;
use crate::numerics::{binomial, integrate, CompensatedSum, Real};
use crate::prior::InverseGamma;

fn binomial_pmf<T: Real>(n: u32, j: u32, p: T) -> T {
    binomial::<T>(n, j) * p.powi(j as i32) * (T::one() - p).powi((n - j) as i32)
}

/// E[D | θ]: the number of failures is Binomial(n, F(T0)) capped at r.
pub fn expected_failures_given_theta<T: Real, L: Lifetime<T>>(
    lifetime: &L,
    design: &Design<T>,
) -> Result<T> {
    design.validate()?;
    let p = lifetime.cdf(design.t0);
    let (n, r) = (design.n, design.r);
    let s: CompensatedSum<T> = (1..=n)
        .map(|j| T::of(j.min(r)) * binomial_pmf(n, j, p))
        .collect();
    Ok(s.value())
}

/// E[η | θ], the expected test duration min(X_(r), T0).
pub fn expected_duration_given_theta<T: Real, L: Lifetime<T>>(
    lifetime: &L,
    design: &Design<T>,
) -> Result<T> {
    design.validate()?;
    let (n, r, t0) = (design.n, design.r, design.t0);
    if n == 0 || r == 0 || t0 == T::zero() {
        return Ok(T::zero());
    }
    let p = lifetime.cdf(t0);
    let reach: CompensatedSum<T> = (r..=n).map(|j| binomial_pmf(n, j, p)).collect();
    let tail = t0 * (T::one() - reach.value());
    let coef = T::of(r) * binomial::<T>(n, r);
    let body = integrate(
        |x: T| {
            x * lifetime.cdf(x).powi(r as i32 - 1)
                * lifetime.survival(x).powi((n - r) as i32)
                * lifetime.pdf(x)
        },
        T::zero(),
        t0,
        T::c(1e-11) * t0.max(T::one()),
    )?;
    Ok((tail + coef * body).max(T::zero()).min(t0))
}

/// E_θ[P(Bin(n, F(T0)) = j)] under an inverse-gamma prior on the exponential mean.
fn prior_pmf<T: Real>(prior: &InverseGamma<T>, design: &Design<T>, j: u32) -> T {
    let (n, t0) = (design.n, design.t0);
    let s: CompensatedSum<T> = (0..=j)
        .map(|i| {
            let mag = binomial::<T>(j, i) * prior.laplace(T::of(n - j + i) * t0);
            if i % 2 == 0 {
                mag
            } else {
                -mag
            }
        })
        .collect();
    binomial::<T>(n, j) * s.value()
}

/// E[D] with θ integrated against the inverse-gamma prior.
pub fn prior_expected_failures<T: Real>(prior: &InverseGamma<T>, design: &Design<T>) -> Result<T> {
    design.validate()?;
    if design.n == 0 || design.t0 == T::zero() {
        return Ok(T::zero());
    }
    let s: CompensatedSum<T> = (1..=design.n)
        .map(|j| T::of(j.min(design.r)) * prior_pmf(prior, design, j))
        .collect();
    Ok(s.value().max(T::zero()).min(T::of(design.r)))
}

/// E[η] with θ integrated against the inverse-gamma prior; needs shape > 1.
pub fn prior_expected_duration<T: Real>(prior: &InverseGamma<T>, design: &Design<T>) -> Result<T> {
    design.validate()?;
    if !(prior.shape > T::one()) {
        return Err(Error::divergence(
            "E[eta]",
            format!(
                "prior expected duration needs shape > 1, got {}",
                prior.shape
            ),
        ));
    }
    let (n, r, t0) = (design.n, design.r, design.t0);
    if n == 0 || r == 0 || t0 == T::zero() {
        return Ok(T::zero());
    }
    let reach: CompensatedSum<T> = (r..=n).map(|j| prior_pmf(prior, design, j)).collect();
    let tail = t0 * (T::one() - reach.value());
    let (a, b) = (prior.shape, prior.scale);
    let am1 = a - T::one();
    // E_θ[∫₀^T0 x e^{−kx/θ}/θ dx] for each k
    let moment = |k: u32| {
        let kt = T::of(k) * t0;
        let kk = T::of(k);
        (b / am1 - (b + a * kt) / am1 * prior.laplace(kt)) / (kk * kk)
    };
    let body: CompensatedSum<T> = (0..r)
        .map(|i| {
            let mag = binomial::<T>(r - 1, i) * moment(n - i);
            if (r - 1 - i) % 2 == 0 {
                mag
            } else {
                -mag
            }
        })
        .collect();
    let coef = T::of(r) * binomial::<T>(n, r);
    Ok((tail + coef * body.value()).max(T::zero()).min(t0))
}
