use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Real;

/// A life-test plan: `n` units on test, stopped at the `r`-th failure or at
/// time `t0`, whichever comes first. `(0, 0, 0)` means no test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Design<T> {
    pub n: u32,
    pub r: u32,
    pub t0: T,
}

impl<T: Real> Design<T> {
    pub fn new(n: u32, r: u32, t0: T) -> Result<Self> {
        let d = Self { n, r, t0 };
        d.validate()?;
        Ok(d)
    }

    /// The "no life test" design.
    pub fn none() -> Self {
        Self {
            n: 0,
            r: 0,
            t0: T::zero(),
        }
    }

    pub fn is_none(&self) -> bool {
        self.n == 0
    }

    pub fn validate(&self) -> Result<()> {
        if self.r > self.n {
            return Err(Error::InvalidDesign(format!(
                "r = {} exceeds n = {}",
                self.r, self.n
            )));
        }
        if !(self.t0 >= T::zero()) || !self.t0.is_finite() {
            return Err(Error::InvalidDesign(format!(
                "T0 = {} must be finite and nonnegative",
                self.t0
            )));
        }
        Ok(())
    }

    /// Checks the design can actually be run.
    pub fn require_test(&self) -> Result<()> {
        self.validate()?;
        if self.n == 0 || self.r == 0 || !(self.t0 > T::zero()) {
            return Err(Error::InvalidDesign(format!(
                "({}, {}, {}) needs n ≥ 1, r ≥ 1 and T0 > 0",
                self.n, self.r, self.t0
            )));
        }
        Ok(())
    }

    /// n·T0, the largest attainable total time on test.
    pub fn v_max(&self) -> T {
        T::of(self.n) * self.t0
    }
}

impl<T: Real> std::fmt::Display for Design<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.n, self.r, self.t0)
    }
}
