use serde::{Deserialize, Serialize};

use super::Design;
use crate::error::{Error, Result};
use crate::lifetime::Lifetime;
use crate::numerics::{open_unit, CompensatedSum, Real, RngStream};

/// An observed Type-I hybrid-censored dataset.
///
/// `eta` is the test duration: the `r`-th failure time when the cap of `r`
/// failures was reached, `T0` otherwise. `v` is the total time on test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "SampleRecord<T>",
    into = "SampleRecord<T>",
    bound = "T: Real"
)]
pub struct HcsSample<T> {
    failures: Vec<T>,
    eta: T,
    v: T,
    design: Design<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Real")]
struct SampleRecord<T> {
    failures: Vec<T>,
    #[serde(default)]
    d: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eta: Option<T>,
    n: u32,
    r: u32,
    t0: T,
}

impl<T: Real> TryFrom<SampleRecord<T>> for HcsSample<T> {
    type Error = Error;

    fn try_from(rec: SampleRecord<T>) -> Result<Self> {
        let design = Design::new(rec.n, rec.r, rec.t0)?;
        let s = HcsSample::new(rec.failures, design)?;
        if let Some(d) = rec.d.filter(|&d| d != s.d()) {
            return Err(Error::InvalidSample(format!(
                "d = {d} but {} failure times listed",
                s.d()
            )));
        }
        if let Some(eta) = rec.eta {
            let tol = T::c(1e-9) * s.eta.abs().max(T::one());
            if !((eta - s.eta).abs() <= tol) {
                return Err(Error::InvalidSample(format!(
                    "eta = {eta} inconsistent with the stopping rule (expected {})",
                    s.eta
                )));
            }
        }
        Ok(s)
    }
}

impl<T: Real> From<HcsSample<T>> for SampleRecord<T> {
    fn from(s: HcsSample<T>) -> Self {
        SampleRecord {
            d: Some(s.d()),
            eta: Some(s.eta),
            n: s.design.n,
            r: s.design.r,
            t0: s.design.t0,
            failures: s.failures,
        }
    }
}

impl<T: Real> HcsSample<T> {
    /// Builds a sample from the ordered failure times seen under `design`.
    pub fn new(failures: Vec<T>, design: Design<T>) -> Result<Self> {
        design.validate()?;
        let d = u32::try_from(failures.len())
            .map_err(|_| Error::InvalidSample("too many failures".into()))?;
        let v = v_statistic(&failures, d, &design)?;
        for &x in &failures {
            if !(x >= T::zero()) || x > design.t0 {
                return Err(Error::InvalidSample(format!(
                    "failure time {x} outside [0, T0 = {}]",
                    design.t0
                )));
            }
        }
        let eta = if d == design.r && d > 0 {
            failures[d as usize - 1]
        } else {
            design.t0
        };
        Ok(Self {
            failures,
            eta,
            v,
            design,
        })
    }

    /// The outcome of running no test.
    pub fn empty() -> Self {
        Self {
            failures: Vec::new(),
            eta: T::zero(),
            v: T::zero(),
            design: Design::none(),
        }
    }

    pub fn failures(&self) -> &[T] {
        &self.failures
    }

    pub fn d(&self) -> u32 {
        self.failures.len() as u32
    }

    pub fn eta(&self) -> T {
        self.eta
    }

    pub fn v(&self) -> T {
        self.v
    }

    pub fn design(&self) -> &Design<T> {
        &self.design
    }

    /// Σ x_i^α + (n − d)·η^α, the Weibull analogue of `v`.
    pub fn weibull_v(&self, alpha: T) -> T {
        let mut s: CompensatedSum<T> = self.failures.iter().map(|&x| x.powf(alpha)).collect();
        let survivors = self.design.n - self.d();
        if survivors > 0 {
            s.add(T::of(survivors) * self.eta.powf(alpha));
        }
        s.value()
    }

    /// Σ ln x_i over the observed failures.
    pub fn sum_log_failures(&self) -> T {
        self.failures.iter().map(|x| x.ln()).sum()
    }

    /// Σ x_i^α ln x_i + (n − d)·η^α ln η, the derivative of `weibull_v`.
    pub fn weibull_v_derivative(&self, alpha: T) -> T {
        let term = |x: T| {
            if x > T::zero() {
                x.powf(alpha) * x.ln()
            } else {
                T::zero()
            }
        };
        let mut s: CompensatedSum<T> = self.failures.iter().map(|&x| term(x)).collect();
        let survivors = self.design.n - self.d();
        if survivors > 0 {
            s.add(T::of(survivors) * term(self.eta));
        }
        s.value()
    }
}

/// Total time on test for `d` ordered failures under `design`.
pub fn v_statistic<T: Real>(failures: &[T], d: u32, design: &Design<T>) -> Result<T> {
    if failures.len() != d as usize {
        return Err(Error::InvalidSample(format!(
            "d = {d} but {} failure times given",
            failures.len()
        )));
    }
    if d > design.r {
        return Err(Error::InvalidSample(format!(
            "d = {d} exceeds the failure cap r = {}",
            design.r
        )));
    }
    if failures.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidSample(
            "failure times must be nondecreasing".into(),
        ));
    }
    let n = T::of(design.n);
    if d == 0 {
        return Ok(n * design.t0);
    }
    let mut s: CompensatedSum<T> = failures.iter().copied().collect();
    let dd = T::of(d);
    if d < design.r {
        s.add((n - dd) * design.t0);
    } else {
        s.add((n - dd) * failures[d as usize - 1]);
    }
    Ok(s.value())
}

/// Simulates one lot's life test.
///
/// Ordered failure times are generated progressively through the survival
/// function, so only the first `r` order statistics are ever drawn.
pub fn generate_hcs_sample<T: Real, L: Lifetime<T>>(
    lifetime: &L,
    design: &Design<T>,
    rng: &mut RngStream,
) -> Result<HcsSample<T>> {
    design.require_test()?;
    let mut failures = Vec::with_capacity(design.r as usize);
    let mut surv = T::one();
    for i in 1..=design.r {
        let u: T = open_unit(rng);
        let remaining = T::of(design.n - i + 1);
        surv = surv * ((-u).ln_1p() / remaining).exp();
        let x = lifetime.quantile_from_survival(surv);
        if x > design.t0 {
            break;
        }
        failures.push(x);
    }
    HcsSample::new(failures, *design)
}
