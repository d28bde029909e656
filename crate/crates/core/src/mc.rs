//! Monte Carlo manufacturer expected utility.
//!
//! Replicate `u` draws the lot parameter, the censored sample and any
//! posterior draws from substreams of `RngStream::new(seed, u)`. Replicates
//! are grouped into fixed blocks whose moments are merged in block order, so
//! the result is identical for any worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::censoring::{generate_hcs_sample, Design, HcsSample};
use crate::decision::{
    consumer_values_weibull, posttest_decision_exp, posttest_decision_weibull, Action,
    WarrantyPolicy, WeibullPriorPair,
};
use crate::error::{Error, Result};
use crate::evaluation::{PlanEvaluation, StandardErrors};
use crate::lifetime::{Exponential, Lifetime, Weibull};
use crate::numerics::{sample_gamma, sample_inverse_gamma, Real, RngStream};
use crate::scenario::{ManufacturerProfile, ModelPriors, Scenario};

pub(crate) const BLOCK: u64 = 1024;

/// Simulation budget and reproducibility settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    /// Outer replicates (lots).
    pub s1: u64,
    /// Posterior draws per replicate.
    pub s2: usize,
    pub seed: u64,
    /// Worker threads; affects speed only.
    pub parallel_width: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            s1: 100_000,
            s2: 1_000,
            seed: 20_240_601,
            parallel_width: 1,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.s1 == 0 || self.s2 == 0 || self.parallel_width == 0 {
            return Err(Error::InvalidConfig(format!(
                "Monte Carlo config {self:?} needs s1, s2, parallel_width ≥ 1"
            )));
        }
        Ok(())
    }
}

/// E[X^q] for a lifetime with known parameters.
pub fn manufacturer_acceptance_moment<T: Real, L: Lifetime<T>>(
    lifetime: &L,
    profile: &ManufacturerProfile<T>,
) -> Result<T> {
    lifetime.moment(profile.q)
}

/// E[q(X)] for an exponential lifetime with mean θ.
pub fn expected_rebate_given_theta<T: Real>(theta: T, policy: &WarrantyPolicy<T>) -> T {
    let (w1, w2) = (policy.w1, policy.w2);
    if w2 > w1 {
        let band = (-w1 / theta).exp() - (-w2 / theta).exp();
        policy.refund() * (T::one() - theta * band / (w2 - w1))
    } else {
        policy.refund() * -(-w1 / theta).exp_m1()
    }
}

/// Per-replicate quantities, in [`PlanEvaluation`] field order from ψ.
pub(crate) type Draw<T> = [T; 7];

#[derive(Debug, Clone, Copy)]
struct Moments<T, const N: usize> {
    count: T,
    mean: [T; N],
    m2: [T; N],
}

impl<T: Real, const N: usize> Moments<T, N> {
    fn new() -> Self {
        Self {
            count: T::zero(),
            mean: [T::zero(); N],
            m2: [T::zero(); N],
        }
    }

    fn push(&mut self, x: &[T; N]) {
        self.count = self.count + T::one();
        for k in 0..N {
            let delta = x[k] - self.mean[k];
            self.mean[k] = self.mean[k] + delta / self.count;
            self.m2[k] = self.m2[k] + delta * (x[k] - self.mean[k]);
        }
    }

    fn merge(&mut self, other: &Self) {
        if other.count == T::zero() {
            return;
        }
        let total = self.count + other.count;
        for k in 0..N {
            let delta = other.mean[k] - self.mean[k];
            self.mean[k] = self.mean[k] + delta * other.count / total;
            self.m2[k] =
                self.m2[k] + other.m2[k] + delta * delta * self.count * other.count / total;
        }
        self.count = total;
    }

    fn standard_errors(&self) -> [T; N] {
        let mut out = [T::zero(); N];
        if self.count > T::one() {
            for k in 0..N {
                out[k] = (self.m2[k] / (self.count - T::one()) / self.count).sqrt();
            }
        }
        out
    }
}

/// Runs `replicate(u)` for u in 0..s1 and returns means and standard errors.
pub(crate) fn run_replicates<T, const N: usize, F>(
    cfg: &McConfig,
    replicate: F,
) -> Result<([T; N], [T; N])>
where
    T: Real,
    F: Fn(u64) -> Result<[T; N]> + Sync,
{
    cfg.validate()?;
    let blocks = cfg.s1.div_ceil(BLOCK);
    let run_block = |b: u64| -> Result<Moments<T, N>> {
        let mut m = Moments::new();
        for u in b * BLOCK..((b + 1) * BLOCK).min(cfg.s1) {
            m.push(&replicate(u)?);
        }
        Ok(m)
    };
    let parts: Vec<Moments<T, N>> = if cfg.parallel_width == 1 {
        (0..blocks).map(run_block).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.parallel_width)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
        pool.install(|| {
            (0..blocks)
                .into_par_iter()
                .map(run_block)
                .collect::<Result<_>>()
        })?
    };
    let mut total = Moments::new();
    for p in &parts {
        total.merge(p);
    }
    Ok((total.mean, total.standard_errors()))
}

pub(crate) fn assemble<T: Real>(
    design: &Design<T>,
    profile: &ManufacturerProfile<T>,
    mean: &[T],
    se: &[T],
) -> PlanEvaluation<T> {
    PlanEvaluation {
        design: *design,
        psi: mean[0] - profile.b4 * T::of(design.n),
        p_awo: mean[1],
        p_aw: mean[2],
        p_r: mean[3],
        e_d: mean[4],
        e_eta: mean[5],
        l_w: mean[6],
        se: Some(StandardErrors {
            psi: se[0],
            p_awo: se[1],
            p_aw: se[2],
            p_r: se[3],
            e_d: se[4],
            e_eta: se[5],
            l_w: se[6],
        }),
    }
}

/// Replicate utility given action weights (w_awo, w_aw, w_r).
pub(crate) fn replicate_draw<T: Real>(
    weights: [T; 3],
    moment: T,
    rebate: T,
    sample: &HcsSample<T>,
    profile: &ManufacturerProfile<T>,
    policy: &WarrantyPolicy<T>,
) -> Draw<T> {
    let [awo, aw, r] = weights;
    let loss = aw * (rebate - policy.cw);
    let d = T::of(sample.d());
    let psi1 = (awo + aw) * (profile.b1 * moment - profile.b2) - loss + r * profile.b3
        - profile.b5 * d
        - profile.b6 * sample.eta();
    [psi1, awo, aw, r, d, sample.eta(), loss]
}

pub(crate) fn indicator<T: Real>(action: Action) -> [T; 3] {
    match action {
        Action::AcceptNoWarranty => [T::one(), T::zero(), T::zero()],
        Action::AcceptWithWarranty => [T::zero(), T::one(), T::zero()],
        Action::Reject => [T::zero(), T::zero(), T::one()],
    }
}

/// Draws a lot's Weibull parameters from independent gamma priors.
pub(crate) fn draw_weibull<T: Real>(
    prior: &WeibullPriorPair<T>,
    rng: &mut RngStream,
) -> Result<Weibull<T>> {
    let alpha = sample_gamma(prior.shape_hyper.shape, prior.shape_hyper.rate, rng)?;
    let lambda = sample_gamma(prior.rate_hyper.shape, prior.rate_hyper.rate, rng)?;
    Weibull::new(alpha, lambda)
}

/// Monte Carlo expected utility of `design`, for either lifetime model.
pub fn evaluate_plan_mc<T: Real>(
    design: &Design<T>,
    scenario: &Scenario<T>,
    cfg: &McConfig,
) -> Result<PlanEvaluation<T>> {
    design.require_test()?;
    cfg.validate()?;
    let profile = &scenario.manufacturer;
    let policy = &scenario.warranty;
    let consumer = &scenario.consumer;
    let (mean, se) = match &scenario.priors {
        ModelPriors::Exponential {
            consumer: cprior,
            manufacturer,
        } => {
            if !(manufacturer.alpha2 > profile.q) {
                return Err(Error::divergence(
                    "acceptance moment",
                    format!(
                        "alpha2 = {} must exceed q = {}",
                        manufacturer.alpha2, profile.q
                    ),
                ));
            }
            run_replicates(cfg, |u| {
                let root = RngStream::new(cfg.seed, u);
                let theta = sample_inverse_gamma(
                    manufacturer.alpha2,
                    manufacturer.beta2,
                    &mut root.child(0),
                )?;
                let life = Exponential::new(theta)?;
                let sample = generate_hcs_sample(&life, design, &mut root.child(1))?;
                let outcome = posttest_decision_exp(&sample, consumer, policy, cprior)?;
                Ok(replicate_draw(
                    indicator(outcome.action),
                    manufacturer_acceptance_moment(&life, profile)?,
                    expected_rebate_given_theta(theta, policy),
                    &sample,
                    profile,
                    policy,
                ))
            })?
        }
        ModelPriors::Weibull {
            consumer: cprior,
            manufacturer,
        } => run_replicates(cfg, |u| {
            let root = RngStream::new(cfg.seed, u);
            let life = draw_weibull(manufacturer, &mut root.child(0))?;
            let sample = generate_hcs_sample(&life, design, &mut root.child(1))?;
            let outcome = posttest_decision_weibull(
                &sample,
                consumer,
                policy,
                cprior,
                cfg.s2,
                &mut root.child(2),
            )?;
            let rebate = consumer_values_weibull(&life, consumer, policy)?.rebate;
            Ok(replicate_draw(
                indicator(outcome.action),
                manufacturer_acceptance_moment(&life, profile)?,
                rebate,
                &sample,
                profile,
                policy,
            ))
        })?,
    };
    Ok(assemble(design, profile, &mean, &se))
}
