//! Consumer decisions under Weibull lifetimes with independent gamma priors.

use rand::Rng;

use super::types::*;
use crate::censoring::HcsSample;
use crate::error::{Error, Result};
use crate::lifetime::{Lifetime, Weibull};
use crate::numerics::ars::{abscissae_around_mode, positive_mode, AdaptiveRejection, LogConcave};
use crate::numerics::{
    integrate, integrate_to_infinity, lower_incomplete_gamma, sample_gamma, Real, RngStream,
};

/// ∫₀ᵇ S(x) dx for a Weibull law.
fn survival_integral<T: Real>(w: &Weibull<T>, b: T) -> Result<T> {
    if b <= T::zero() {
        return Ok(T::zero());
    }
    let s = w.alpha.recip();
    let g = lower_incomplete_gamma(s, w.lambda * b.powf(w.alpha))?;
    Ok(g / (w.alpha * w.lambda.powf(s)))
}

/// Expected acceptance loss and expected rebate at a fixed (α, λ).
pub fn consumer_values_weibull<T: Real>(
    theta: &Weibull<T>,
    consumer: &ConsumerProfile<T>,
    policy: &WarrantyPolicy<T>,
) -> Result<ConsumerValues<T>> {
    Weibull::new(theta.alpha, theta.lambda)?;
    let acceptance = consumer.a1
        * (T::one() - survival_integral(theta, consumer.life)? / consumer.life)
        + consumer.a2;
    let rebate = if policy.w2 > policy.w1 {
        let mean_survival = (survival_integral(theta, policy.w2)?
            - survival_integral(theta, policy.w1)?)
            / (policy.w2 - policy.w1);
        policy.refund() * (T::one() - mean_survival)
    } else {
        policy.refund() * theta.cdf(policy.w1)
    };
    Ok(ConsumerValues { acceptance, rebate })
}

/// E[S(x)] under the prior pair: λ integrated analytically,
/// E_λ[e^{−λ x^α}] = (dd / (dd + x^α))^c, then α by quadrature.
fn prior_mean_survival<T: Real>(prior: &WeibullPriorPair<T>, x: T) -> Result<T> {
    if x <= T::zero() {
        return Ok(T::one());
    }
    let (c, dd) = (prior.rate_hyper.shape, prior.rate_hyper.rate);
    let shape = prior.shape_hyper;
    integrate_to_infinity(
        |a: T| {
            if a <= T::zero() {
                return T::zero();
            }
            (shape.ln_pdf(a) - c * (x.powf(a) / dd).ln_1p()).exp()
        },
        T::zero(),
        T::c(1e-12),
    )
}

/// ∫ₐᵇ E[S(x)] dx under the prior pair.
pub(crate) fn prior_survival_area<T: Real>(prior: &WeibullPriorPair<T>, a: T, b: T) -> Result<T> {
    let mut failure = None;
    let v = integrate(
        |x: T| match prior_mean_survival(prior, x) {
            Ok(s) => s,
            Err(e) => {
                failure.get_or_insert(e);
                T::zero()
            }
        },
        a,
        b,
        T::c(1e-11) * (b - a).max(T::one()),
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// Expected rebate with (α, λ) averaged over the prior pair.
pub(crate) fn prior_expected_rebate_weibull<T: Real>(
    policy: &WarrantyPolicy<T>,
    prior: &WeibullPriorPair<T>,
) -> Result<T> {
    if policy.w2 > policy.w1 {
        Ok(policy.refund()
            * (T::one()
                - prior_survival_area(prior, policy.w1, policy.w2)? / (policy.w2 - policy.w1)))
    } else {
        Ok(policy.refund() * (T::one() - prior_mean_survival(prior, policy.w1)?))
    }
}

/// Prior-expected consumer values.
pub fn pretest_values_weibull<T: Real>(
    consumer: &ConsumerProfile<T>,
    policy: &WarrantyPolicy<T>,
    prior: &WeibullPriorPair<T>,
) -> Result<ConsumerValues<T>> {
    prior.validate()?;
    let area = prior_survival_area(prior, T::zero(), consumer.life)?;
    Ok(ConsumerValues {
        acceptance: consumer.a1 * (T::one() - area / consumer.life) + consumer.a2,
        rebate: prior_expected_rebate_weibull(policy, prior)?,
    })
}

/// Log of the marginal posterior density of α (up to a constant) with λ
/// integrated out, and its derivative.
struct AlphaMarginal<'a, T> {
    sample: &'a HcsSample<T>,
    k: T,
    v: T,
    sum_log: T,
    a: T,
    dd: T,
}

impl<T: Real> LogConcave<T> for AlphaMarginal<'_, T> {
    fn eval(&self, alpha: T) -> (T, T) {
        let w = self.sample.weibull_v(alpha) + self.dd;
        let dw = self.sample.weibull_v_derivative(alpha);
        let h = self.k * alpha.ln() - self.v * alpha + (alpha - T::one()) * self.sum_log
            - self.a * w.ln();
        let dh = self.k / alpha - self.v + self.sum_log - self.a * dw / w;
        (h, dh)
    }
}

/// Draws from the joint posterior of (α, λ) given a censored sample.
///
/// α comes from its marginal by adaptive rejection sampling (the marginal is
/// log-concave whenever u + d ≥ 1); otherwise by importance resampling with
/// the prior as proposal. λ | α is then gamma(c + d, v_α + dd).
pub fn sample_weibull_posterior<T: Real>(
    prior: &WeibullPriorPair<T>,
    sample: &HcsSample<T>,
    count: usize,
    rng: &mut RngStream,
) -> Result<Vec<Weibull<T>>> {
    prior.validate()?;
    if count == 0 {
        return Err(Error::InvalidConfig(
            "posterior draw count must be at least 1".into(),
        ));
    }
    if sample.failures().iter().any(|&x| !(x > T::zero())) {
        return Err(Error::InvalidSample(
            "Weibull likelihood needs positive failure times".into(),
        ));
    }
    let d = T::of(sample.d());
    let (u, v) = (prior.shape_hyper.shape, prior.shape_hyper.rate);
    let (c, dd) = (prior.rate_hyper.shape, prior.rate_hyper.rate);
    let marginal = AlphaMarginal {
        sample,
        k: u + d - T::one(),
        v,
        sum_log: sample.sum_log_failures(),
        a: c + d,
        dd,
    };
    let alphas = if u + d >= T::one() {
        let (mode, scale) = positive_mode(&marginal, prior.shape_hyper.mean())?;
        let init = abscissae_around_mode(mode, scale);
        let mut ars = AdaptiveRejection::new(marginal, T::zero(), T::infinity(), &init)?;
        (0..count)
            .map(|_| ars.sample(rng))
            .collect::<Result<Vec<T>>>()?
    } else {
        importance_resample(&marginal, prior, count, rng)?
    };
    alphas
        .into_iter()
        .map(|alpha| {
            let rate = sample.weibull_v(alpha) + dd;
            let lambda = sample_gamma(c + d, rate, rng)?;
            Ok(Weibull { alpha, lambda })
        })
        .collect()
}

fn importance_resample<T: Real>(
    marginal: &AlphaMarginal<'_, T>,
    prior: &WeibullPriorPair<T>,
    count: usize,
    rng: &mut RngStream,
) -> Result<Vec<T>> {
    let pool = (count * 10).max(1_000);
    let shape = prior.shape_hyper;
    let mut proposals = Vec::with_capacity(pool);
    let mut log_w = Vec::with_capacity(pool);
    for _ in 0..pool {
        let a = sample_gamma(shape.shape, shape.rate, rng)?;
        proposals.push(a);
        log_w.push(marginal.eval(a).0 - shape.ln_pdf(a));
    }
    let m = log_w.iter().copied().fold(T::neg_infinity(), T::max);
    let mut cum = Vec::with_capacity(pool);
    let mut total = T::zero();
    for lw in &log_w {
        total = total + (*lw - m).exp();
        cum.push(total);
    }
    Ok((0..count)
        .map(|_| {
            let u = T::c(rng.random::<f64>()) * total;
            proposals[cum.partition_point(|&c| c <= u).min(pool - 1)]
        })
        .collect())
}

/// Posterior-mean consumer values from `draws`.
pub fn posterior_values_weibull<T: Real>(
    draws: &[Weibull<T>],
    consumer: &ConsumerProfile<T>,
    policy: &WarrantyPolicy<T>,
) -> Result<ConsumerValues<T>> {
    let n = T::of(draws.len() as u64);
    let mut acc = T::zero();
    let mut reb = T::zero();
    for w in draws {
        let cv = consumer_values_weibull(w, consumer, policy)?;
        acc = acc + cv.acceptance;
        reb = reb + cv.rebate;
    }
    Ok(ConsumerValues {
        acceptance: acc / n,
        rebate: reb / n,
    })
}

/// Post-test decision with posterior expectations estimated from `s2` draws.
pub fn posttest_decision_weibull<T: Real>(
    sample: &HcsSample<T>,
    consumer: &ConsumerProfile<T>,
    policy: &WarrantyPolicy<T>,
    prior: &WeibullPriorPair<T>,
    s2: usize,
    rng: &mut RngStream,
) -> Result<DecisionOutcome<T>> {
    let draws = sample_weibull_posterior(prior, sample, s2, rng)?;
    Ok(posterior_values_weibull(&draws, consumer, policy)?.decide(
        consumer,
        policy,
        Stage::PostTest,
    ))
}
