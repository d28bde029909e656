use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Real;
use crate::prior::{GammaPrior, InverseGamma};

/// Consumer loss parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConsumerProfile<T> {
    /// Proportional loss for a unit failing before `life`.
    pub a1: T,
    /// Fixed cost of accepting the lot.
    pub a2: T,
    /// Loss from rejecting the lot.
    pub a3: T,
    /// Required minimum lifetime L.
    #[serde(rename = "L")]
    pub life: T,
}

impl<T: Real> ConsumerProfile<T> {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.a1, self.a2, self.a3, self.life]
            .iter()
            .all(|x| x.is_finite());
        if !finite || !(self.a1 > T::zero()) || !(self.life > T::zero()) {
            return Err(Error::InvalidConfig(format!(
                "consumer profile {self:?} needs a1 > 0 and L > 0"
            )));
        }
        Ok(())
    }

    /// The acceptance cut on the expected shortfall ∫₀ᴸ F: L(a3 − a2)/a1.
    pub fn shortfall_cut(&self) -> T {
        self.life * (self.a3 - self.a2) / self.a1
    }
}

/// Combined free-replacement / pro-rata rebate warranty.
///
/// A unit failing before `w1` is refunded `cs + cw`; between `w1` and `w2`
/// the refund falls linearly to zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WarrantyPolicy<T> {
    pub w1: T,
    pub w2: T,
    /// Selling price of a unit.
    pub cs: T,
    /// Price of the warranty.
    pub cw: T,
    /// Unit supply cost; carried for reporting, it enters no utility.
    #[serde(default)]
    pub cm: T,
}

impl<T: Real> WarrantyPolicy<T> {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.w1, self.w2, self.cs, self.cw, self.cm]
            .iter()
            .all(|x| x.is_finite());
        if !finite
            || !(self.w1 >= T::zero())
            || !(self.w1 <= self.w2)
            || !(self.cs >= T::zero())
            || !(self.cw >= T::zero())
        {
            return Err(Error::InvalidConfig(format!(
                "warranty {self:?} needs 0 ≤ w1 ≤ w2 and nonnegative prices"
            )));
        }
        Ok(())
    }

    /// Full refund amount cs + cw.
    pub fn refund(&self) -> T {
        self.cs + self.cw
    }
}

/// Consumer's inverse-gamma prior on the exponential mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpConsumerPrior<T> {
    pub alpha1: T,
    pub beta1: T,
}

impl<T: Real> ExpConsumerPrior<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha1 > T::one())
            || !(self.beta1 > T::zero())
            || !self.alpha1.is_finite()
            || !self.beta1.is_finite()
        {
            return Err(Error::InvalidConfig(format!(
                "consumer prior (alpha1 = {}, beta1 = {}) needs alpha1 > 1 and beta1 > 0",
                self.alpha1, self.beta1
            )));
        }
        Ok(())
    }

    pub fn inverse_gamma(&self) -> InverseGamma<T> {
        InverseGamma {
            shape: self.alpha1,
            scale: self.beta1,
        }
    }
}

/// Independent gamma priors on the Weibull shape α and rate λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeibullPriorPair<T> {
    /// (u, v): α ~ Gamma(shape u, rate v).
    pub shape_hyper: GammaPrior<T>,
    /// (c, dd): λ ~ Gamma(shape c, rate dd).
    pub rate_hyper: GammaPrior<T>,
}

impl<T: Real> WeibullPriorPair<T> {
    pub fn new(u: T, v: T, c: T, dd: T) -> Result<Self> {
        Ok(Self {
            shape_hyper: GammaPrior::new(u, v)?,
            rate_hyper: GammaPrior::new(c, dd)?,
        })
    }

    pub fn validate(&self) -> Result<()> {
        GammaPrior::new(self.shape_hyper.shape, self.shape_hyper.rate)
            .and(GammaPrior::new(self.rate_hyper.shape, self.rate_hyper.rate))
            .map(|_| ())
            .map_err(|e| Error::InvalidConfig(format!("Weibull prior: {e}")))
    }
}

/// The consumer's three possible actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    AcceptNoWarranty,
    AcceptWithWarranty,
    Reject,
}

impl Action {
    pub fn label(&self) -> &'static str {
        match self {
            Action::AcceptNoWarranty => "accept without warranty",
            Action::AcceptWithWarranty => "accept with warranty",
            Action::Reject => "reject",
        }
    }
}

/// Where in the negotiation a decision was taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stage {
    PreTest,
    PostTest,
}

/// A consumer decision with the two margins it was based on.
///
/// `e1` is expected acceptance loss minus `a3`; `e2` additionally credits the
/// expected rebate net of the warranty price. A pre-test `Reject` means the
/// lot goes to life testing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct DecisionOutcome<T> {
    pub action: Action,
    pub stage: Stage,
    pub e1: Option<T>,
    pub e2: Option<T>,
}

/// Expected acceptance loss and expected rebate under some belief about θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsumerValues<T> {
    pub acceptance: T,
    pub rebate: T,
}

impl<T: Real> ConsumerValues<T> {
    /// Applies the staged rule: accept outright if e1 ≤ 0, else with the
    /// warranty if e2 ≤ 0, else reject.
    pub fn decide(
        &self,
        consumer: &ConsumerProfile<T>,
        policy: &WarrantyPolicy<T>,
        stage: Stage,
    ) -> DecisionOutcome<T> {
        let e1 = self.acceptance - consumer.a3;
        let e2 = e1 - self.rebate + policy.cw;
        let action = if e1 <= T::zero() {
            Action::AcceptNoWarranty
        } else if e2 <= T::zero() {
            Action::AcceptWithWarranty
        } else {
            Action::Reject
        };
        DecisionOutcome {
            action,
            stage,
            e1: Some(e1),
            e2: Some(e2),
        }
    }
}

/// Cut points on `v` for each failure count `d = 0..=r`.
///
/// `v > c1[d]` accepts without warranty, `c2[d] < v ≤ c1[d]` accepts with
/// the warranty and `v ≤ c2[d]` rejects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thresholds<T> {
    pub c_raw: Vec<T>,
    pub cprime_raw: Vec<T>,
    pub c1: Vec<T>,
    pub c2: Vec<T>,
}

impl<T: Real> Thresholds<T> {
    pub fn classify(&self, v: T, d: u32) -> Action {
        let d = d as usize;
        if v > self.c1[d] {
            Action::AcceptNoWarranty
        } else if v > self.c2[d] {
            Action::AcceptWithWarranty
        } else {
            Action::Reject
        }
    }
}
