//! Expected-utility reports shared by all engines.

use serde::{Deserialize, Serialize};

use crate::censoring::Design;
use crate::numerics::Real;

/// Manufacturer's expected utility of a design and its decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct PlanEvaluation<T> {
    pub design: Design<T>,
    pub psi: T,
    pub p_awo: T,
    pub p_aw: T,
    pub p_r: T,
    pub e_d: T,
    pub e_eta: T,
    pub l_w: T,
    /// Monte Carlo standard errors, absent for closed-form results.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub se: Option<StandardErrors<T>>,
}

/// Standard errors matching the fields of [`PlanEvaluation`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandardErrors<T> {
    pub psi: T,
    pub p_awo: T,
    pub p_aw: T,
    pub p_r: T,
    pub e_d: T,
    pub e_eta: T,
    pub l_w: T,
}

impl<T: Real> PlanEvaluation<T> {
    pub const CSV_HEADER: &'static str = "n,r,t0,psi,p_awo,p_aw,p_r,e_d,e_eta,l_w";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.design.n,
            self.design.r,
            self.design.t0,
            self.psi,
            self.p_awo,
            self.p_aw,
            self.p_r,
            self.e_d,
            self.e_eta,
            self.l_w
        )
    }

    /// A report for a no-test outcome with all mass on one action.
    pub fn degenerate(psi: T, p_awo: T, p_aw: T, p_r: T, l_w: T) -> Self {
        Self {
            design: Design::none(),
            psi,
            p_awo,
            p_aw,
            p_r,
            e_d: T::zero(),
            e_eta: T::zero(),
            l_w,
            se: None,
        }
    }
}

/// Manufacturer utilities of the three no-test outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Baselines<T> {
    pub accept_no_warranty: T,
    pub accept_with_warranty: T,
    pub reject: T,
    /// Expected rebate net of the warranty price, paid on warranty acceptance.
    pub warranty_loss: T,
}
