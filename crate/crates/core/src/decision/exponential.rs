//! Consumer decisions under exponential lifetimes with an inverse-gamma prior.

use super::types::*;
use crate::censoring::{Design, HcsSample};
use crate::error::{Error, Result};
use crate::numerics::{find_root_decreasing, Real};
use crate::prior::InverseGamma;

const MONOTONE_GRID: usize = 256;

/// (1 − e^{−a·t}) / a, continuous through a = 0.
fn expm1_ratio<T: Real>(a: T, t: T) -> T {
    let at = a * t;
    if at.abs() < T::c(1e-12) {
        t
    } else {
        -(-at).exp_m1() / a
    }
}

fn require_shape<T: Real>(shape: T, term: &'static str) -> Result<()> {
    if shape > T::one() {
        Ok(())
    } else {
        Err(Error::divergence(
            term,
            format!("inverse-gamma shape {shape} must exceed 1"),
        ))
    }
}

/// E[∫₀ᴸ F_θ(x) dx] for θ ~ IG(shape, scale).
pub fn expected_shortfall<T: Real>(belief: &InverseGamma<T>, life: T) -> T {
    let a = belief.shape - T::one();
    life - belief.scale * expm1_ratio(a, (life / belief.scale).ln_1p())
}

/// E[q(X)] for θ ~ IG(shape, scale).
pub fn expected_rebate<T: Real>(belief: &InverseGamma<T>, policy: &WarrantyPolicy<T>) -> T {
    let (w1, w2) = (policy.w1, policy.w2);
    let b = belief.scale;
    if w2 == w1 {
        return policy.refund() * (T::one() - belief.laplace(w1));
    }
    let a = belief.shape - T::one();
    // (1/(w2−w1))∫_{w1}^{w2} E[S(x)] dx
    let lead = (-a * (w1 / b).ln_1p()).exp();
    let t = ((b + w2) / (b + w1)).ln();
    let mean_survival = b * lead * expm1_ratio(a, t) / (w2 - w1);
    policy.refund() * (T::one() - mean_survival)
}

/// Refund paid for a unit failing at age `x`.
pub fn rebate<T: Real>(x: T, policy: &WarrantyPolicy<T>) -> T {
    if x < policy.w1 {
        policy.refund()
    } else if x < policy.w2 {
        policy.refund() * (policy.w2 - x) / (policy.w2 - policy.w1)
    } else {
        T::zero()
    }
}

/// Prior expected acceptance loss (a1/L)·E[∫₀ᴸ F] + a2.
pub fn pretest_acceptance_value_exp<T: Real>(
    consumer: &ConsumerProfile<T>,
    prior: &ExpConsumerPrior<T>,
) -> Result<T> {
    require_shape(prior.alpha1, "pre-test acceptance value")?;
    Ok(
        consumer.a1 / consumer.life * expected_shortfall(&prior.inverse_gamma(), consumer.life)
            + consumer.a2,
    )
}

/// Prior expected rebate.
pub fn pretest_expected_rebate_exp<T: Real>(
    policy: &WarrantyPolicy<T>,
    prior: &ExpConsumerPrior<T>,
) -> Result<T> {
    require_shape(prior.alpha1, "pre-test expected rebate")?;
    Ok(expected_rebate(&prior.inverse_gamma(), policy))
}

pub fn pretest_values_exp<T: Real>(
    consumer: &ConsumerProfile<T>,
    policy: &WarrantyPolicy<T>,
    prior: &ExpConsumerPrior<T>,
) -> Result<ConsumerValues<T>> {
    Ok(ConsumerValues {
        acceptance: pretest_acceptance_value_exp(consumer, prior)?,
        rebate: pretest_expected_rebate_exp(policy, prior)?,
    })
}

/// Decision before any test, from prior expectations.
pub fn pretest_decision<T: Real>(
    consumer: &ConsumerProfile<T>,
    policy: &WarrantyPolicy<T>,
    prior_values: &ConsumerValues<T>,
) -> DecisionOutcome<T> {
    prior_values.decide(consumer, policy, Stage::PreTest)
}

/// Conjugate update (α1 + d, β1 + v).
pub fn posterior_params_exp<T: Real>(
    prior: &ExpConsumerPrior<T>,
    sample: &HcsSample<T>,
) -> ExpConsumerPrior<T> {
    ExpConsumerPrior {
        alpha1: prior.alpha1 + T::of(sample.d()),
        beta1: prior.beta1 + sample.v(),
    }
}

fn posterior<T: Real>(v: T, d: u32, prior: &ExpConsumerPrior<T>) -> InverseGamma<T> {
    InverseGamma {
        shape: prior.alpha1 + T::of(d),
        scale: prior.beta1 + v,
    }
}

/// A1: posterior expected shortfall E[∫₀ᴸ F | v, d].
pub fn a1_statistic<T: Real>(
    v: T,
    d: u32,
    consumer: &ConsumerProfile<T>,
    prior: &ExpConsumerPrior<T>,
) -> Result<T> {
    let post = posterior(v, d, prior);
    require_shape(post.shape, "A1")?;
    Ok(expected_shortfall(&post, consumer.life))
}

/// A2: posterior expected rebate net of the warranty price.
pub fn a2_statistic<T: Real>(
    v: T,
    d: u32,
    policy: &WarrantyPolicy<T>,
    prior: &ExpConsumerPrior<T>,
) -> Result<T> {
    let post = posterior(v, d, prior);
    require_shape(post.shape, "A2")?;
    Ok(expected_rebate(&post, policy) - policy.cw)
}

fn posterior_values<T: Real>(
    v: T,
    d: u32,
    consumer: &ConsumerProfile<T>,
    policy: &WarrantyPolicy<T>,
    prior: &ExpConsumerPrior<T>,
) -> Result<ConsumerValues<T>> {
    let post = posterior(v, d, prior);
    require_shape(post.shape, "posterior consumer values")?;
    Ok(ConsumerValues {
        acceptance: consumer.a1 / consumer.life * expected_shortfall(&post, consumer.life)
            + consumer.a2,
        rebate: expected_rebate(&post, policy),
    })
}

/// Decision after observing `sample`.
pub fn posttest_decision_exp<T: Real>(
    sample: &HcsSample<T>,
    consumer: &ConsumerProfile<T>,
    policy: &WarrantyPolicy<T>,
    prior: &ExpConsumerPrior<T>,
) -> Result<DecisionOutcome<T>> {
    Ok(
        posterior_values(sample.v(), sample.d(), consumer, policy, prior)?.decide(
            consumer,
            policy,
            Stage::PostTest,
        ),
    )
}

/// Per-d cut points on v for the post-test decision.
///
/// Fails with [`Error::NonMonotone`] when the with-warranty margin changes
/// sign more than once on `[0, n·T0]`, since the cut representation would
/// then misclassify samples.
pub fn thresholds_exp<T: Real>(
    design: &Design<T>,
    consumer: &ConsumerProfile<T>,
    policy: &WarrantyPolicy<T>,
    prior: &ExpConsumerPrior<T>,
) -> Result<Thresholds<T>> {
    design.validate()?;
    let v_max = design.v_max();
    let tol = T::c(1e-9) * v_max;
    let cut = consumer.shortfall_cut();
    let count = design.r as usize + 1;
    let mut th = Thresholds {
        c_raw: Vec::with_capacity(count),
        cprime_raw: Vec::with_capacity(count),
        c1: Vec::with_capacity(count),
        c2: Vec::with_capacity(count),
    };
    for d in 0..=design.r {
        require_shape(prior.alpha1 + T::of(d), "thresholds")?;
        let e1 = |v: T| {
            a1_statistic(v, d, consumer, prior)
                .map(|a| a - cut)
                .unwrap_or(T::nan())
        };
        let e2 = |v: T| {
            posterior_values(v, d, consumer, policy, prior)
                .map(|cv| cv.acceptance - cv.rebate + policy.cw - consumer.a3)
                .unwrap_or(T::nan())
        };
        let (c, cp) = if v_max > T::zero() {
            check_single_crossing(&e2, v_max, d)?;
            (
                find_root_decreasing(e1, T::zero(), v_max, tol)?,
                find_root_decreasing(e2, T::zero(), v_max, tol)?,
            )
        } else {
            (T::zero(), T::zero())
        };
        let c1 = c.max(T::zero()).min(v_max);
        let c2 = cp.max(T::zero()).min(c);
        th.c_raw.push(c);
        th.cprime_raw.push(cp);
        th.c1.push(c1);
        th.c2.push(c2);
    }
    Ok(th)
}

fn check_single_crossing<T: Real, F: Fn(T) -> T>(f: &F, v_max: T, d: u32) -> Result<()> {
    let mut seen_nonpositive = false;
    for i in 0..=MONOTONE_GRID {
        let v = v_max * T::of(i as u64) / T::of(MONOTONE_GRID as u64);
        let y = f(v);
        if y.is_nan() {
            return Err(Error::divergence(
                "with-warranty margin",
                format!("NaN at v = {v}, d = {d}"),
            ));
        }
        if y <= T::zero() {
            seen_nonpositive = true;
        } else if seen_nonpositive {
            return Err(Error::NonMonotone { d });
        }
    }
    Ok(())
}
