//! Closed-form expected utility for exponential lifetimes.
//!
//! Every probability and moment is a finite sum of terms
//! `coef · E_θ[θ^l e^{−w/θ} ∫_region g(y − c; d, 1/θ) dy]`, each of which
//! reduces to a gamma function times a difference of regularized incomplete
//! beta functions.

use crate::censoring::{prior_expected_duration, prior_expected_failures, Design};
use crate::decision::{expected_rebate, prior_expected_rebate_weibull, thresholds_exp, Thresholds};
use crate::error::{Error, Result};
use crate::evaluation::{Baselines, PlanEvaluation};
use crate::numerics::{
    binomial, find_root_decreasing, integrate_to_infinity, log_gamma, log_gamma_unchecked,
    regularized_incomplete_beta, regularized_lower_gamma, CompensatedSum, Real,
};
use crate::scenario::{ExpManufacturerPrior, ModelPriors, Scenario};

/// Largest sample size the alternating sums are trusted for.
pub const MAX_EXACT_N: u32 = 30;

/// Γ(b)/(β2 + w + c)^b · [I_{s2}(d, b) − I_{s1}(d, b)] with b = α2 − l and
/// shift c = (n + j − d)·T0.
#[allow(clippy::too_many_arguments)]
pub fn h_term<T: Real>(
    w: T,
    l: T,
    j: i64,
    d: u32,
    s1: T,
    s2: T,
    prior: &ExpManufacturerPrior<T>,
    design: &Design<T>,
) -> Result<T> {
    let b = prior.alpha2 - l;
    if !(b > T::zero()) {
        return Err(Error::divergence(
            "H",
            format!("alpha2 = {} must exceed l = {l}", prior.alpha2),
        ));
    }
    if d == 0 {
        return Err(Error::domain("h_term", "d must be at least 1"));
    }
    let k = i64::from(design.n) + j - i64::from(d);
    if k < 0 {
        return Err(Error::domain("h_term", format!("negative shift index {k}")));
    }
    let shift = T::of(k as u64) * design.t0;
    let span = regularized_incomplete_beta(s2, T::of(d), b)?
        - regularized_incomplete_beta(s1, T::of(d), b)?;
    Ok((log_gamma(b)? - b * (prior.beta2 + w + shift).ln()).exp() * span)
}

/// One shifted-gamma component of the (V, D) density: `coef · e^{−shift/θ} g(y − shift)`.
#[derive(Debug, Clone, Copy)]
struct Component<T> {
    coef: T,
    shift: T,
}

struct ExactEngine<T> {
    design: Design<T>,
    alpha2: T,
    beta2: T,
    ln_norm: T,
    components: Vec<Vec<Component<T>>>,
}

impl<T: Real> ExactEngine<T> {
    fn new(design: Design<T>, prior: &ExpManufacturerPrior<T>) -> Result<Self> {
        let (n, r, t0) = (design.n, design.r, design.t0);
        let mut components = vec![Vec::new()];
        for d in 1..=r {
            let mut row = Vec::new();
            if d < r {
                let lead: T = binomial(n, d);
                for i in 0..=d {
                    let mag = lead * binomial::<T>(d, i);
                    row.push(Component {
                        coef: if i % 2 == 0 { mag } else { -mag },
                        shift: T::of(n - d + i) * t0,
                    });
                }
            } else {
                row.push(Component {
                    coef: T::one(),
                    shift: T::zero(),
                });
                let lead = T::of(r) * binomial::<T>(n, r);
                for k in 1..=r {
                    let mag = lead * binomial::<T>(r - 1, k - 1) / T::of(n - r + k);
                    row.push(Component {
                        coef: if k % 2 == 0 { mag } else { -mag },
                        shift: T::of(n - r + k) * t0,
                    });
                }
            }
            components.push(row);
        }
        Ok(Self {
            design,
            alpha2: prior.alpha2,
            beta2: prior.beta2,
            ln_norm: prior.alpha2 * prior.beta2.ln() - log_gamma(prior.alpha2)?,
            components,
        })
    }

    /// E_θ[θ^l e^{−w/θ} · P(D = 0 | θ)].
    fn atom(&self, l: T, w: T) -> T {
        let b = self.alpha2 - l;
        (self.ln_norm + log_gamma_unchecked(b) - b * (self.beta2 + w + self.design.v_max()).ln())
            .exp()
    }

    /// E_θ[θ^l e^{−w/θ} · P(lo < V ≤ hi, D = d | θ)] for d ≥ 1.
    fn region(&self, l: T, w: T, d: u32, lo: T, hi: T) -> Result<T> {
        if !(hi > lo) {
            return Ok(T::zero());
        }
        let b = self.alpha2 - l;
        let a = self.beta2 + w;
        let dd = T::of(d);
        let mut acc = CompensatedSum::new();
        for comp in &self.components[d as usize] {
            let from = lo.max(comp.shift);
            if !(hi > from) {
                continue;
            }
            let s1 = (from - comp.shift) / (from + a);
            let s2 = (hi - comp.shift) / (hi + a);
            let span =
                regularized_incomplete_beta(s2, dd, b)? - regularized_incomplete_beta(s1, dd, b)?;
            let mag = (self.ln_norm + log_gamma_unchecked(b) - b * (a + comp.shift).ln()).exp();
            acc.add(comp.coef * mag * span);
        }
        Ok(acc.value())
    }
}

/// Region of the no-failure atom at v = n·T0.
fn atom_action<T: Real>(th: &Thresholds<T>, v_max: T) -> usize {
    if v_max > th.c1[0] {
        0
    } else if v_max > th.c2[0] {
        1
    } else {
        2
    }
}

/// Exact expected utility of `design` under the exponential model.
pub fn evaluate_plan_exp<T: Real>(
    design: &Design<T>,
    scenario: &Scenario<T>,
) -> Result<PlanEvaluation<T>> {
    design.require_test()?;
    if design.n > MAX_EXACT_N {
        return Err(Error::InvalidDesign(format!(
            "n = {} exceeds the exact engine's range (n ≤ {MAX_EXACT_N}); use the Monte Carlo engine",
            design.n
        )));
    }
    let (consumer_prior, prior) = scenario.exponential_priors("exact")?;
    let m = &scenario.manufacturer;
    let policy = &scenario.warranty;
    let need = m.q.max(T::one());
    if !(prior.alpha2 > need) {
        return Err(Error::divergence(
            "expected utility",
            format!("alpha2 = {} must exceed max(q, 1) = {need}", prior.alpha2),
        ));
    }
    let th = thresholds_exp(design, &scenario.consumer, policy, &consumer_prior)?;
    let engine = ExactEngine::new(*design, &prior)?;
    let v_max = design.v_max();
    let zero = T::zero();

    // probabilities of X, Y, Z; acceptance moment; Y-region rebate moments
    let mut p = [
        CompensatedSum::new(),
        CompensatedSum::new(),
        CompensatedSum::new(),
    ];
    let mut moment = CompensatedSum::new();
    let mut y_rebate = CompensatedSum::new();
    let warranty_window = policy.w2 > policy.w1;

    let atom_region = atom_action(&th, v_max);
    p[atom_region].add(engine.atom(zero, zero));
    if atom_region < 2 {
        moment.add(engine.atom(m.q, zero));
    }
    if atom_region == 1 {
        if warranty_window {
            y_rebate.add(engine.atom(T::one(), policy.w1) - engine.atom(T::one(), policy.w2));
        } else {
            y_rebate.add(engine.atom(zero, policy.w1));
        }
    }
    for d in 1..=design.r {
        let (c1, c2) = (th.c1[d as usize], th.c2[d as usize]);
        p[0].add(engine.region(zero, zero, d, c1, v_max)?);
        p[1].add(engine.region(zero, zero, d, c2, c1)?);
        p[2].add(engine.region(zero, zero, d, zero, c2)?);
        moment.add(engine.region(m.q, zero, d, c2, v_max)?);
        if warranty_window {
            y_rebate.add(
                engine.region(T::one(), policy.w1, d, c2, c1)?
                    - engine.region(T::one(), policy.w2, d, c2, c1)?,
            );
        } else {
            y_rebate.add(engine.region(zero, policy.w1, d, c2, c1)?);
        }
    }
    let (p_awo, p_aw, p_r) = (p[0].value(), p[1].value(), p[2].value());
    let l_w = if warranty_window {
        policy.cs * p_aw - policy.refund() / (policy.w2 - policy.w1) * y_rebate.value()
    } else {
        policy.cs * p_aw - policy.refund() * y_rebate.value()
    };
    let ig = prior.inverse_gamma();
    let e_d = prior_expected_failures(&ig, design)?;
    let e_eta = prior_expected_duration(&ig, design)?;
    let gq = log_gamma(m.q + T::one())?.exp();
    let psi = m.b1 * gq * moment.value() - m.b2 * (p_awo + p_aw) - l_w + m.b3 * p_r
        - m.b4 * T::of(design.n)
        - m.b5 * e_d
        - m.b6 * e_eta;
    if !psi.is_finite() {
        return Err(Error::divergence(
            "expected utility",
            format!("non-finite value at {design}"),
        ));
    }
    Ok(PlanEvaluation {
        design: *design,
        psi,
        p_awo,
        p_aw,
        p_r,
        e_d,
        e_eta,
        l_w,
        se: None,
    })
}

/// Manufacturer utilities of accepting outright, accepting with the
/// warranty, and rejecting, all without a life test.
pub fn baseline_utilities<T: Real>(scenario: &Scenario<T>) -> Result<Baselines<T>> {
    let m = &scenario.manufacturer;
    let policy = &scenario.warranty;
    let (moment, rebate) = match &scenario.priors {
        ModelPriors::Exponential { manufacturer, .. } => {
            let ig = manufacturer.inverse_gamma();
            let gq = log_gamma(m.q + T::one())?.exp();
            (gq * ig.moment(m.q)?, expected_rebate(&ig, policy))
        }
        ModelPriors::Weibull { manufacturer, .. } => (
            weibull_prior_moment(manufacturer, m.q)?,
            prior_expected_rebate_weibull(policy, manufacturer)?,
        ),
    };
    let accept = m.b1 * moment - m.b2;
    let warranty_loss = rebate - policy.cw;
    Ok(Baselines {
        accept_no_warranty: accept,
        accept_with_warranty: accept - warranty_loss,
        reject: m.b3,
        warranty_loss,
    })
}

/// Prior mass of the Weibull shape left out of the acceptance moment.
const SHAPE_TAIL: f64 = 1e-12;

/// E[Γ(q/α + 1)·λ^{−q/α}] with α's prior truncated below its `SHAPE_TAIL` quantile.
///
/// Untruncated, the moment is infinite: E[λ^{−q/α} | α] grows like 1/(α − q/c)
/// as α ↓ q/c, and any gamma prior on α puts density there.
fn weibull_prior_moment<T: Real>(prior: &crate::decision::WeibullPriorPair<T>, q: T) -> Result<T> {
    let (c, dd) = (prior.rate_hyper.shape, prior.rate_hyper.rate);
    let shape = prior.shape_hyper;
    let cut = q / c;
    let tail = T::c(SHAPE_TAIL);
    let lo = find_root_decreasing(
        |a: T| tail - regularized_lower_gamma(shape.shape, shape.rate * a).unwrap_or(T::one()),
        T::zero(),
        shape.mean(),
        shape.mean() * T::c(1e-12),
    )?;
    if !(lo > cut) {
        return Err(Error::divergence(
            "Weibull acceptance moment",
            format!("shape prior's {SHAPE_TAIL} quantile {lo} is not above q/c = {cut}, where E[λ^(-q/α)] is infinite"),
        ));
    }
    let lg_c = log_gamma(c)?;
    let moment = integrate_to_infinity(
        |t: T| {
            let a = lo + t;
            let e = q / a;
            (shape.ln_pdf(a) + log_gamma_unchecked(e + T::one()) + log_gamma_unchecked(c - e)
                - lg_c
                + e * dd.ln())
            .exp()
        },
        T::zero(),
        T::c(1e-10),
    )?;
    Ok(moment / (T::one() - tail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::{ConsumerProfile, ExpConsumerPrior, WarrantyPolicy};
    use crate::scenario::ManufacturerProfile;

    fn example1() -> Scenario<f64> {
        Scenario {
            consumer: ConsumerProfile {
                a1: 10.0,
                a2: 5.0,
                a3: 9.0,
                life: 15.0,
            },
            manufacturer: ManufacturerProfile {
                b1: 10.0,
                b2: 5.0,
                b3: 25.0,
                b4: 1.0,
                b5: 0.5,
                b6: 0.5,
                q: 0.8,
            },
            warranty: WarrantyPolicy {
                w1: 5.0,
                w2: 10.0,
                cs: 2.0,
                cw: 0.5,
                cm: 0.0,
            },
            priors: ModelPriors::Exponential {
                consumer: ExpConsumerPrior {
                    alpha1: 2.0,
                    beta1: 3.0,
                },
                manufacturer: ExpManufacturerPrior {
                    alpha2: 1.8,
                    beta2: 18.0,
                },
            },
            rdsp: None,
        }
    }

    #[test]
    fn h_term_edges() {
        let prior = ExpManufacturerPrior {
            alpha2: 3.0,
            beta2: 2.0,
        };
        let design = Design::new(4, 2, 1.0).unwrap();
        assert_eq!(
            h_term(0.5, 1.0, 0, 1, 0.3, 0.3, &prior, &design).unwrap(),
            0.0
        );
        let full = h_term(0.5, 1.0, 0, 1, 0.0, 1.0, &prior, &design).unwrap();
        // Γ(2)/(2 + 0.5 + 3)^2
        assert!((full - 1.0 / 5.5f64.powi(2)).abs() < 1e-14);
        assert!(h_term(0.5, 3.0, 0, 1, 0.0, 1.0, &prior, &design).is_err());
    }

    #[test]
    fn probabilities_partition() {
        let s = example1();
        for &(n, r, t0) in &[(5, 2, 5.75), (1, 1, 1.71), (8, 5, 10.0), (10, 7, 11.76)] {
            let e = evaluate_plan_exp(&Design::new(n, r, t0).unwrap(), &s).unwrap();
            assert!((e.p_awo + e.p_aw + e.p_r - 1.0).abs() < 1e-10, "{e:?}");
            assert!(e.e_d >= 0.0 && e.e_d <= f64::from(r));
            assert!(e.e_eta >= 0.0 && e.e_eta <= t0);
        }
    }

    #[test]
    fn example1_plan() {
        let e = evaluate_plan_exp(&Design::new(5, 2, 5.75).unwrap(), &example1()).unwrap();
        assert!((e.psi - 70.6).abs() < 0.5, "{e:?}");
        assert!((e.p_awo - 0.18).abs() < 0.02);
        assert!((e.p_aw - 0.24).abs() < 0.02);
        assert!((e.e_d - 1.40).abs() < 0.02);
    }

    #[test]
    fn baselines() {
        let b = baseline_utilities(&example1()).unwrap();
        assert_eq!(b.reject, 25.0);
        let moment = 18f64.powf(0.8);
        assert!((b.accept_no_warranty - (10.0 * moment - 5.0)).abs() < 1e-9);
        assert!(b.accept_with_warranty < b.accept_no_warranty);
    }

    #[test]
    fn rejects_weibull_and_large_n() {
        let s = example1();
        assert!(matches!(
            evaluate_plan_exp(&Design::new(31, 2, 1.0).unwrap(), &s),
            Err(Error::InvalidDesign(_))
        ));
    }
}
