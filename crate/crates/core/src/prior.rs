//! Conjugate prior families shared by both parties' models.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{log_gamma, Real};

/// Inverse gamma law with density ∝ θ^{−shape−1} e^{−scale/θ}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InverseGamma<T> {
    pub shape: T,
    pub scale: T,
}

impl<T: Real> InverseGamma<T> {
    pub fn new(shape: T, scale: T) -> Result<Self> {
        if !(shape > T::zero() && scale > T::zero()) || !shape.is_finite() || !scale.is_finite() {
            return Err(Error::domain(
                "InverseGamma::new",
                format!("shape = {shape}, scale = {scale}"),
            ));
        }
        Ok(Self { shape, scale })
    }

    /// E[e^{−k/θ}] = (scale / (scale + k))^shape, for k ≥ 0.
    pub fn laplace(&self, k: T) -> T {
        (-self.shape * (k / self.scale).ln_1p()).exp()
    }

    /// E[θ^q], finite only for q < shape.
    pub fn moment(&self, q: T) -> Result<T> {
        if !(q < self.shape) {
            return Err(Error::divergence(
                "inverse-gamma moment",
                format!("E[θ^{q}] requires shape {} > {q}", self.shape),
            ));
        }
        Ok((q * self.scale.ln() + log_gamma(self.shape - q)? - log_gamma(self.shape)?).exp())
    }
}

/// Gamma law with density ∝ y^{shape−1} e^{−rate·y}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaPrior<T> {
    pub shape: T,
    pub rate: T,
}

impl<T: Real> GammaPrior<T> {
    pub fn new(shape: T, rate: T) -> Result<Self> {
        if !(shape > T::zero() && rate > T::zero()) || !shape.is_finite() || !rate.is_finite() {
            return Err(Error::domain(
                "GammaPrior::new",
                format!("shape = {shape}, rate = {rate}"),
            ));
        }
        Ok(Self { shape, rate })
    }

    pub fn mean(&self) -> T {
        self.shape / self.rate
    }

    pub fn ln_pdf(&self, y: T) -> T {
        if y <= T::zero() {
            return T::neg_infinity();
        }
        self.shape * self.rate.ln() - log_gamma(self.shape).unwrap_or(T::nan())
            + (self.shape - T::one()) * y.ln()
            - self.rate * y
    }
}
