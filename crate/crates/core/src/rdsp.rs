//! Random decision-making sampling plans.
//!
//! The consumer's loss parameters and prior hyper-parameters are unknown to
//! the manufacturer and modeled as independent uniforms. For a given sample
//! the manufacturer weights its three outcomes by the fraction of consumers
//! that would take each action after testing, among those who would not have
//! decided before the test.

use serde::{Deserialize, Serialize};

use crate::censoring::{generate_hcs_sample, Design, HcsSample};
use crate::decision::{
    posttest_decision_exp, pretest_decision, pretest_values_exp, Action, ConsumerProfile,
    ExpConsumerPrior, WarrantyPolicy,
};
use crate::error::{Error, Result};
use crate::evaluation::PlanEvaluation;
use crate::lifetime::Exponential;
use crate::mc::{
    assemble, expected_rebate_given_theta, manufacturer_acceptance_moment, replicate_draw,
    run_replicates, McConfig,
};
use crate::numerics::{open_unit, sample_inverse_gamma, Real, RngStream};
use crate::scenario::{ModelPriors, Scenario};

/// Uniform bounds `[low, high]` for each random consumer input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RdspBounds<T> {
    pub a1: (T, T),
    pub a2: (T, T),
    pub a3: (T, T),
    #[serde(rename = "L")]
    pub life: (T, T),
    pub alpha1: (T, T),
    pub beta1: (T, T),
    /// Consumer draws per sample.
    #[serde(rename = "K")]
    pub k: u32,
}

impl<T: Real> RdspBounds<T> {
    pub fn validate(&self) -> Result<()> {
        let pairs = [
            ("a1", self.a1, T::zero()),
            ("a2", self.a2, T::neg_infinity()),
            ("a3", self.a3, T::neg_infinity()),
            ("L", self.life, T::zero()),
            ("alpha1", self.alpha1, T::one()),
            ("beta1", self.beta1, T::zero()),
        ];
        for (name, (lo, hi), floor) in pairs {
            if !lo.is_finite() || !hi.is_finite() || !(lo <= hi) || !(lo >= floor) {
                return Err(Error::InvalidConfig(format!(
                    "rdsp bound {name} = [{lo}, {hi}] must satisfy {floor} ≤ low ≤ high"
                )));
            }
            if lo == floor && hi == floor && floor.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "rdsp bound {name} must exceed {floor}"
                )));
            }
        }
        if self.k == 0 {
            return Err(Error::InvalidConfig("rdsp K must be at least 1".into()));
        }
        Ok(())
    }

    /// Point-mass bounds at a fixed consumer.
    pub fn point(consumer: &ConsumerProfile<T>, prior: &ExpConsumerPrior<T>, k: u32) -> Self {
        let p = |x: T| (x, x);
        Self {
            a1: p(consumer.a1),
            a2: p(consumer.a2),
            a3: p(consumer.a3),
            life: p(consumer.life),
            alpha1: p(prior.alpha1),
            beta1: p(prior.beta1),
            k,
        }
    }

    fn draw(&self, rng: &mut RngStream) -> (ConsumerProfile<T>, ExpConsumerPrior<T>) {
        let mut u = |(lo, hi): (T, T)| {
            if hi > lo {
                lo + open_unit::<T>(rng) * (hi - lo)
            } else {
                lo
            }
        };
        let consumer = ConsumerProfile {
            a1: u(self.a1),
            a2: u(self.a2),
            a3: u(self.a3),
            life: u(self.life),
        };
        let prior = ExpConsumerPrior {
            alpha1: u(self.alpha1),
            beta1: u(self.beta1),
        };
        (consumer, prior)
    }
}

/// Estimated action frequencies among random consumers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionProbabilities<T> {
    pub p0_awo: T,
    pub p0_aw: T,
    pub p0_r: T,
    /// Post-test frequencies among consumers who rejected before the test.
    pub p1_awo: T,
    pub p1_aw: T,
    pub p1_r: T,
    /// False when no draw reached the test; the post-test triple is then (0, 0, 1).
    pub conditional_defined: bool,
}

impl<T: Real> ActionProbabilities<T> {
    /// Overall frequencies: pre-test decisions plus tested consumers.
    pub fn unconditional(&self) -> [T; 3] {
        [
            self.p0_awo + self.p0_r * self.p1_awo,
            self.p0_aw + self.p0_r * self.p1_aw,
            self.p0_r * self.p1_r,
        ]
    }

    pub fn conditional(&self) -> [T; 3] {
        [self.p1_awo, self.p1_aw, self.p1_r]
    }
}

/// Runs the staged decision for `bounds.k` random consumers against `sample`.
pub fn estimate_action_probabilities<T: Real>(
    sample: &HcsSample<T>,
    bounds: &RdspBounds<T>,
    policy: &WarrantyPolicy<T>,
    rng: &mut RngStream,
) -> Result<ActionProbabilities<T>> {
    bounds.validate()?;
    let mut pre = [0u32; 3];
    let mut post = [0u32; 3];
    for _ in 0..bounds.k {
        let (consumer, prior) = bounds.draw(rng);
        let values = pretest_values_exp(&consumer, policy, &prior)?;
        let first = pretest_decision(&consumer, policy, &values).action;
        pre[slot(first)] += 1;
        if first == Action::Reject {
            post[slot(posttest_decision_exp(sample, &consumer, policy, &prior)?.action)] += 1;
        }
    }
    let k = T::of(bounds.k);
    let tested = pre[2];
    let (p1, defined) = if tested > 0 {
        let t = T::of(tested);
        (
            [T::of(post[0]) / t, T::of(post[1]) / t, T::of(post[2]) / t],
            true,
        )
    } else {
        ([T::zero(), T::zero(), T::one()], false)
    };
    Ok(ActionProbabilities {
        p0_awo: T::of(pre[0]) / k,
        p0_aw: T::of(pre[1]) / k,
        p0_r: T::of(pre[2]) / k,
        p1_awo: p1[0],
        p1_aw: p1[1],
        p1_r: p1[2],
        conditional_defined: defined,
    })
}

fn slot(a: Action) -> usize {
    match a {
        Action::AcceptNoWarranty => 0,
        Action::AcceptWithWarranty => 1,
        Action::Reject => 2,
    }
}

/// RDSP evaluation: the plan report weighted by post-test frequencies, and
/// the average unconditional frequencies alongside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct RdspEvaluation<T> {
    pub plan: PlanEvaluation<T>,
    /// Mean over replicates of the unconditional (A_wo, A_w, R) frequencies.
    pub unconditional: [T; 3],
    /// Replicates in which no random consumer reached the test.
    pub undefined_replicates: u64,
}

/// Expected utility of `design` when the consumer is random within `bounds`.
pub fn evaluate_plan_rdsp<T: Real>(
    design: &Design<T>,
    scenario: &Scenario<T>,
    bounds: &RdspBounds<T>,
    cfg: &McConfig,
) -> Result<RdspEvaluation<T>> {
    design.require_test()?;
    bounds.validate()?;
    let manufacturer = match &scenario.priors {
        ModelPriors::Exponential { manufacturer, .. } => *manufacturer,
        _ => {
            return Err(Error::InvalidConfig(
                "the rdsp engine supports only the exponential model".into(),
            ))
        }
    };
    let profile = &scenario.manufacturer;
    let policy = &scenario.warranty;
    if !(manufacturer.alpha2 > profile.q) {
        return Err(Error::divergence(
            "acceptance moment",
            format!(
                "alpha2 = {} must exceed q = {}",
                manufacturer.alpha2, profile.q
            ),
        ));
    }
    // slots 7..11 carry the unconditional triple and the undefined flag
    let (mean, se) = run_replicates(cfg, |u| {
        let root = RngStream::new(cfg.seed, u);
        let theta =
            sample_inverse_gamma(manufacturer.alpha2, manufacturer.beta2, &mut root.child(0))?;
        let life = Exponential::new(theta)?;
        let sample = generate_hcs_sample(&life, design, &mut root.child(1))?;
        let probs = estimate_action_probabilities(&sample, bounds, policy, &mut root.child(2))?;
        let draw = replicate_draw(
            probs.conditional(),
            manufacturer_acceptance_moment(&life, profile)?,
            expected_rebate_given_theta(theta, policy),
            &sample,
            profile,
            policy,
        );
        let [a, b, c] = probs.unconditional();
        let undefined = if probs.conditional_defined {
            T::zero()
        } else {
            T::one()
        };
        let mut out = [T::zero(); 11];
        out[..7].copy_from_slice(&draw);
        out[7..].copy_from_slice(&[a, b, c, undefined]);
        Ok(out)
    })?;
    Ok(RdspEvaluation {
        plan: assemble(design, profile, &mean[..7], &se[..7]),
        unconditional: [mean[7], mean[8], mean[9]],
        undefined_replicates: (mean[10] * T::of(cfg.s1)).round().to_u64().unwrap_or(0),
    })
}
