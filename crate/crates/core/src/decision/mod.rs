//! The consumer's staged accept/reject decisions.

mod exponential;
mod types;
mod weibull;

pub use exponential::{
    a1_statistic, a2_statistic, expected_rebate, expected_shortfall, posterior_params_exp,
    posttest_decision_exp, pretest_acceptance_value_exp, pretest_decision,
    pretest_expected_rebate_exp, pretest_values_exp, rebate, thresholds_exp,
};
pub use types::{
    Action, ConsumerProfile, ConsumerValues, DecisionOutcome, ExpConsumerPrior, Stage, Thresholds,
    WarrantyPolicy, WeibullPriorPair,
};
pub(crate) use weibull::prior_expected_rebate_weibull;
pub use weibull::{
    consumer_values_weibull, posterior_values_weibull, posttest_decision_weibull,
    pretest_values_weibull, sample_weibull_posterior,
};
