//! Special functions, quadrature, root finding and seeded sampling.

pub mod ars;
mod quadrature;
mod real;
mod rng;
mod roots;
mod sampling;
mod special;
mod summation;

pub use quadrature::{integrate, integrate_to_infinity};
pub use real::Real;
pub use rng::RngStream;
pub use roots::find_root_decreasing;
pub use sampling::{open_unit, sample_gamma, sample_inverse_gamma, uniform};
pub(crate) use special::log_gamma_unchecked;
pub use special::{
    gamma, log_beta, log_gamma, lower_incomplete_gamma, regularized_incomplete_beta,
    regularized_lower_gamma,
};
pub use summation::{binomial, CompensatedSum};
