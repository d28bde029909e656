//! Type-I hybrid censoring: designs, samples, the law of (V, D) and the
//! expected test-cost terms.

mod density;
mod design;
mod expectations;
mod sample;

pub use density::{atom_mass, joint_density};
pub use design::Design;
pub use expectations::{
    expected_duration_given_theta, expected_failures_given_theta, prior_expected_duration,
    prior_expected_failures,
};
pub use sample::{generate_hcs_sample, v_statistic, HcsSample};
