//! Bayesian reliability acceptance sampling plans under Type-I hybrid
//! censoring with a combined free-replacement / pro-rata rebate warranty.
//!
//! The consumer decides from prior and posterior expected losses whether to
//! accept a lot, accept it with the warranty, or reject it; the manufacturer
//! chooses the life-test design (n, r, T0) maximizing its pre-posterior
//! expected utility. Exponential plans are evaluated in closed form, any
//! model by Monte Carlo.

pub mod censoring;
pub mod decision;
pub mod error;
pub mod evaluation;
pub mod exact;
pub mod lifetime;
pub mod mc;
pub mod numerics;
pub mod optimizer;
pub mod prior;
pub mod rdsp;
pub mod scenario;

pub use censoring::{Design, HcsSample};
pub use decision::{Action, DecisionOutcome, Stage};
pub use error::{Error, Result};
pub use evaluation::{Baselines, PlanEvaluation};
pub use exact::{baseline_utilities, evaluate_plan_exp};
pub use mc::{evaluate_plan_mc, McConfig};
pub use optimizer::{optimize, Engine, Optimum, SearchSpace};
pub use rdsp::{estimate_action_probabilities, evaluate_plan_rdsp, RdspBounds};
pub use scenario::{ManufacturerProfile, ModelPriors, Scenario};

pub type Design64 = censoring::Design<f64>;
pub type HcsSample64 = censoring::HcsSample<f64>;
pub type Scenario64 = scenario::Scenario<f64>;
pub type PlanEvaluation64 = evaluation::PlanEvaluation<f64>;
pub type Baselines64 = evaluation::Baselines<f64>;
pub type RdspBounds64 = rdsp::RdspBounds<f64>;
pub type SearchSpace64 = optimizer::SearchSpace<f64>;
pub type Optimum64 = optimizer::Optimum<f64>;
pub type ConsumerProfile64 = decision::ConsumerProfile<f64>;
pub type WarrantyPolicy64 = decision::WarrantyPolicy<f64>;
pub type DecisionOutcome64 = decision::DecisionOutcome<f64>;
