//! Parameter bundles describing one negotiation.

use serde::{Deserialize, Serialize};

use crate::decision::{ConsumerProfile, ExpConsumerPrior, WarrantyPolicy, WeibullPriorPair};
use crate::error::{Error, Result};
use crate::numerics::Real;
use crate::prior::InverseGamma;
use crate::rdsp::RdspBounds;

/// Manufacturer utility parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManufacturerProfile<T> {
    /// Profit rate per unit of lifetime^q on acceptance.
    pub b1: T,
    /// Fixed cost of an accepted lot.
    pub b2: T,
    /// Utility of a rejected lot.
    pub b3: T,
    /// Cost per unit put on test.
    pub b4: T,
    /// Cost per observed failure.
    pub b5: T,
    /// Cost per unit of test duration.
    pub b6: T,
    /// Risk exponent on lifetime.
    pub q: T,
}

impl<T: Real> ManufacturerProfile<T> {
    pub fn validate(&self) -> Result<()> {
        let all = [self.b1, self.b2, self.b3, self.b4, self.b5, self.b6, self.q];
        if !all.iter().all(|x| x.is_finite()) || !(self.b1 > T::zero()) || !(self.q > T::zero()) {
            return Err(Error::InvalidConfig(format!(
                "manufacturer profile {self:?} needs b1 > 0 and q > 0"
            )));
        }
        Ok(())
    }
}

/// Manufacturer's inverse-gamma prior on the exponential mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpManufacturerPrior<T> {
    pub alpha2: T,
    pub beta2: T,
}

impl<T: Real> ExpManufacturerPrior<T> {
    pub fn validate(&self) -> Result<()> {
        InverseGamma::new(self.alpha2, self.beta2)
            .map(|_| ())
            .map_err(|e| Error::InvalidConfig(format!("manufacturer prior: {e}")))
    }

    pub fn inverse_gamma(&self) -> InverseGamma<T> {
        InverseGamma {
            shape: self.alpha2,
            scale: self.beta2,
        }
    }
}

/// Lifetime model together with both parties' priors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelPriors<T> {
    Exponential {
        consumer: ExpConsumerPrior<T>,
        manufacturer: ExpManufacturerPrior<T>,
    },
    Weibull {
        consumer: WeibullPriorPair<T>,
        manufacturer: WeibullPriorPair<T>,
    },
}

impl<T: Real> ModelPriors<T> {
    pub fn name(&self) -> &'static str {
        match self {
            ModelPriors::Exponential { .. } => "exponential",
            ModelPriors::Weibull { .. } => "weibull",
        }
    }
}

/// Everything needed to evaluate a life-test design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario<T> {
    pub consumer: ConsumerProfile<T>,
    pub manufacturer: ManufacturerProfile<T>,
    pub warranty: WarrantyPolicy<T>,
    pub priors: ModelPriors<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rdsp: Option<RdspBounds<T>>,
}

impl<T: Real> Scenario<T> {
    pub fn validate(&self) -> Result<()> {
        self.consumer.validate()?;
        self.manufacturer.validate()?;
        self.warranty.validate()?;
        match &self.priors {
            ModelPriors::Exponential {
                consumer,
                manufacturer,
            } => {
                consumer.validate()?;
                manufacturer.validate()?;
            }
            ModelPriors::Weibull {
                consumer,
                manufacturer,
            } => {
                consumer.validate()?;
                manufacturer.validate()?;
            }
        }
        if let Some(b) = &self.rdsp {
            b.validate()?;
        }
        Ok(())
    }

    /// The exponential priors, or an error naming the engine that needs them.
    pub fn exponential_priors(
        &self,
        engine: &str,
    ) -> Result<(ExpConsumerPrior<T>, ExpManufacturerPrior<T>)> {
        match self.priors {
            ModelPriors::Exponential {
                consumer,
                manufacturer,
            } => Ok((consumer, manufacturer)),
            _ => Err(Error::InvalidConfig(format!(
                "the {engine} engine supports only the exponential model"
            ))),
        }
    }
}
