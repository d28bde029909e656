//! Lifetime distributions of the units on test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{gamma, Real};

/// A continuous lifetime law on `(0, ∞)` with known parameters.
pub trait Lifetime<T: Real> {
    fn cdf(&self, x: T) -> T;
    fn pdf(&self, x: T) -> T;

    fn survival(&self, x: T) -> T {
        T::one() - self.cdf(x)
    }

    /// The `x` with `survival(x) = s`, for `s ∈ (0, 1]`.
    fn quantile_from_survival(&self, s: T) -> T;

    /// E[X^q].
    fn moment(&self, q: T) -> Result<T>;
}

/// Exponential lifetime with mean `theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exponential<T> {
    pub theta: T,
}

impl<T: Real> Exponential<T> {
    pub fn new(theta: T) -> Result<Self> {
        if !(theta > T::zero()) || !theta.is_finite() {
            return Err(Error::domain(
                "Exponential::new",
                format!("theta = {theta}"),
            ));
        }
        Ok(Self { theta })
    }
}

impl<T: Real> Lifetime<T> for Exponential<T> {
    fn cdf(&self, x: T) -> T {
        if x <= T::zero() {
            return T::zero();
        }
        -(-x / self.theta).exp_m1()
    }

    fn pdf(&self, x: T) -> T {
        if x < T::zero() {
            return T::zero();
        }
        (-x / self.theta).exp() / self.theta
    }

    fn survival(&self, x: T) -> T {
        if x <= T::zero() {
            return T::one();
        }
        (-x / self.theta).exp()
    }

    fn quantile_from_survival(&self, s: T) -> T {
        -self.theta * s.ln()
    }

    fn moment(&self, q: T) -> Result<T> {
        Ok(self.theta.powf(q) * gamma(q + T::one())?)
    }
}

/// Weibull lifetime with cdf 1 − exp(−λ x^α).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weibull<T> {
    pub alpha: T,
    pub lambda: T,
}

impl<T: Real> Weibull<T> {
    pub fn new(alpha: T, lambda: T) -> Result<Self> {
        if !(alpha > T::zero() && lambda > T::zero()) || !alpha.is_finite() || !lambda.is_finite() {
            return Err(Error::domain(
                "Weibull::new",
                format!("alpha = {alpha}, lambda = {lambda}"),
            ));
        }
        Ok(Self { alpha, lambda })
    }
}

impl<T: Real> Lifetime<T> for Weibull<T> {
    fn cdf(&self, x: T) -> T {
        if x <= T::zero() {
            return T::zero();
        }
        -(-self.lambda * x.powf(self.alpha)).exp_m1()
    }

    fn pdf(&self, x: T) -> T {
        if x <= T::zero() {
            return T::zero();
        }
        let xa = x.powf(self.alpha);
        self.alpha * self.lambda * xa / x * (-self.lambda * xa).exp()
    }

    fn survival(&self, x: T) -> T {
        if x <= T::zero() {
            return T::one();
        }
        (-self.lambda * x.powf(self.alpha)).exp()
    }

    fn quantile_from_survival(&self, s: T) -> T {
        (-s.ln() / self.lambda).powf(self.alpha.recip())
    }

    fn moment(&self, q: T) -> Result<T> {
        Ok(self.lambda.powf(-q / self.alpha) * gamma(q / self.alpha + T::one())?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weibull_unit_shape_is_exponential() {
        let e = Exponential::new(2.5f64).unwrap();
        let w = Weibull::new(1.0f64, 0.4).unwrap();
        for &x in &[0.1, 1.0, 3.0, 10.0] {
            assert!((e.cdf(x) - w.cdf(x)).abs() < 1e-14);
            assert!((e.pdf(x) - w.pdf(x)).abs() < 1e-14);
        }
        assert!((e.moment(1.5).unwrap() - w.moment(1.5).unwrap()).abs() < 1e-12);
        assert!((e.quantile_from_survival(0.3) - w.quantile_from_survival(0.3)).abs() < 1e-12);
    }

    #[test]
    fn quantile_inverts_survival() {
        let w = Weibull::new(1.7f64, 0.8).unwrap();
        for &s in &[0.01, 0.5, 0.99] {
            assert!((w.survival(w.quantile_from_survival(s)) - s).abs() < 1e-13);
        }
    }

    #[test]
    fn exponential_mean() {
        assert!((Exponential::new(3.0f64).unwrap().moment(1.0).unwrap() - 3.0).abs() < 1e-12);
    }
}
