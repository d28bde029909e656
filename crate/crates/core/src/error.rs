use thiserror::Error;

/// Errors raised anywhere in the planning toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// A closed-form expectation does not exist for the given parameters.
    #[error("divergent term `{term}`: {detail}")]
    Divergence { term: &'static str, detail: String },

    /// An iterative scheme failed to converge.
    #[error("{func} did not converge: {detail}")]
    Convergence { func: &'static str, detail: String },

    /// An observed or simulated sample violates the censoring invariants.
    #[error("invalid hybrid-censored sample: {0}")]
    InvalidSample(String),

    /// A life-test design is malformed or unsupported by the requested engine.
    #[error("invalid design: {0}")]
    InvalidDesign(String),

    /// A scenario, search space or engine configuration is malformed.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The with-warranty decision statistic is not monotone in `v`, so the
    /// region representation used by the exact engine does not apply.
    #[error("decision statistic is not monotone in v for d = {d}; use the Monte Carlo engine")]
    NonMonotone { d: u32 },
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }

    pub(crate) fn divergence(term: &'static str, detail: impl Into<String>) -> Self {
        Error::Divergence {
            term,
            detail: detail.into(),
        }
    }

    /// True for errors caused by numerics rather than by malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Divergence { .. } | Error::Convergence { .. } | Error::NonMonotone { .. }
        )
    }
}

pub type Result<V, E = Error> = std::result::Result<V, E>;
