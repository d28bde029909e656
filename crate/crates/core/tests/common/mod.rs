#![allow(dead_code)]

use rasp_core::decision::{ConsumerProfile, ExpConsumerPrior, WarrantyPolicy, WeibullPriorPair};
use rasp_core::rdsp::RdspBounds;
use rasp_core::scenario::{ExpManufacturerPrior, ManufacturerProfile, ModelPriors, Scenario};

const STEP: f64 = 1.0 / 64.0;
const SPAN: f64 = 4.5;

/// Tanh-sinh quadrature on [a, b], independent of the library's Gauss–Kronrod rule.
pub fn quad<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let width = b - a;
    let steps = (SPAN / STEP) as i64;
    let mut total = 0.0;
    for k in -steps..=steps {
        let t = k as f64 * STEP;
        let u = half_pi * t.sinh();
        // s = (1 + tanh u) / 2 and 1 − s, both without cancellation
        let (s, sc) = (
            1.0 / (1.0 + (-2.0 * u).exp()),
            1.0 / (1.0 + (2.0 * u).exp()),
        );
        let x = if s < 0.5 {
            a + width * s
        } else {
            b - width * sc
        };
        if x <= a || x >= b {
            continue;
        }
        let v = f(x) * width * 2.0 * s * sc * half_pi * t.cosh();
        if v.is_finite() {
            total += v;
        }
    }
    total * STEP
}

/// Exp-sinh quadrature on [a, ∞).
pub fn quad_to_infinity<F: Fn(f64) -> f64>(f: &F, a: f64) -> f64 {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let steps = (SPAN / STEP) as i64;
    let mut total = 0.0;
    for k in -steps..=steps {
        let t = k as f64 * STEP;
        let e = (half_pi * t.sinh()).exp();
        let v = f(a + e) * e * half_pi * t.cosh();
        if v.is_finite() {
            total += v;
        }
    }
    total * STEP
}

/// Inverse-gamma density with shape `a`, scale `b`.
pub fn inverse_gamma_pdf(theta: f64, a: f64, b: f64) -> f64 {
    if theta <= 0.0 {
        return 0.0;
    }
    (a * b.ln() - ln_gamma(a) - (a + 1.0) * theta.ln() - b / theta).exp()
}

/// Gamma density with shape `a`, rate `b`.
pub fn gamma_pdf(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    (a * b.ln() - ln_gamma(a) + (a - 1.0) * x.ln() - b * x).exp()
}

/// Stirling series with upward recurrence; independent of the library's Lanczos form.
pub fn ln_gamma(x: f64) -> f64 {
    let mut shift = 0.0;
    let mut z = x;
    while z < 10.0 {
        shift -= z.ln();
        z += 1.0;
    }
    let z2 = z * z;
    shift + (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * z)
        - 1.0 / (360.0 * z * z2)
        + 1.0 / (1260.0 * z2 * z2 * z)
        - 1.0 / (1680.0 * z2 * z2 * z2 * z)
}

pub fn example_consumer() -> (
    ConsumerProfile<f64>,
    WarrantyPolicy<f64>,
    ExpConsumerPrior<f64>,
) {
    (
        ConsumerProfile {
            a1: 10.0,
            a2: 5.0,
            a3: 9.0,
            life: 15.0,
        },
        WarrantyPolicy {
            w1: 5.0,
            w2: 10.0,
            cs: 2.0,
            cw: 0.5,
            cm: 0.0,
        },
        ExpConsumerPrior {
            alpha1: 2.0,
            beta1: 3.0,
        },
    )
}

/// The exponential reference scenario.
pub fn example1() -> Scenario<f64> {
    let (consumer, warranty, prior) = example_consumer();
    Scenario {
        consumer,
        manufacturer: ManufacturerProfile {
            b1: 10.0,
            b2: 5.0,
            b3: 25.0,
            b4: 1.0,
            b5: 0.5,
            b6: 0.5,
            q: 0.8,
        },
        warranty,
        priors: ModelPriors::Exponential {
            consumer: prior,
            manufacturer: ExpManufacturerPrior {
                alpha2: 1.8,
                beta2: 18.0,
            },
        },
        rdsp: None,
    }
}

pub fn random_consumer_bounds() -> RdspBounds<f64> {
    RdspBounds {
        a1: (10.0, 20.0),
        a2: (1.0, 7.0),
        a3: (3.0, 12.0),
        life: (12.0, 18.0),
        alpha1: (1.0, 8.0),
        beta1: (1.5, 3.5),
        k: 500,
    }
}

/// The exponential reference scenario with a random consumer.
pub fn example2() -> Scenario<f64> {
    Scenario {
        rdsp: Some(random_consumer_bounds()),
        ..example1()
    }
}

/// The Weibull application scenario.
pub fn application() -> Scenario<f64> {
    Scenario {
        consumer: ConsumerProfile {
            a1: 12000.0,
            a2: 5000.0,
            a3: 8250.0,
            life: 0.5,
        },
        manufacturer: ManufacturerProfile {
            b1: 3000.0,
            b2: 1000.0,
            b3: 250.0,
            b4: 30.0,
            b5: 10.0,
            b6: 5.0,
            q: 1.0,
        },
        warranty: WarrantyPolicy {
            w1: 0.2,
            w2: 0.3,
            cs: 2000.0,
            cw: 200.0,
            cm: 0.0,
        },
        priors: ModelPriors::Weibull {
            consumer: WeibullPriorPair::new(11.23, 10.0, 22.52, 10.0).unwrap(),
            manufacturer: WeibullPriorPair::new(112.3, 100.0, 112.6, 100.0).unwrap(),
        },
        rdsp: None,
    }
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
