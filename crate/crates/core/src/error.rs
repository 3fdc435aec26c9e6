use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function}: argument {value} is outside the domain {domain}")]
    Domain {
        function: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("weight {id} is singular at the support endpoint x = {x}")]
    SingularEndpoint { id: String, x: f64 },

    #[error("x = {x} is at or beyond the radius of convergence R = {radius}")]
    RadiusExceeded { x: f64, radius: f64 },

    #[error("x = {x} is within a relative 1e-6 of the radius R = {radius}; the series converges too slowly")]
    SlowConvergence { x: f64, radius: f64 },

    #[error("{what}: truncation did not meet tolerance before the hard cap of {cap} terms")]
    TruncationFailure { what: String, cap: usize },

    #[error("quadrature did not converge after {levels} refinements (last estimate {estimate:e}, error estimate {error:e})")]
    QuadratureNonConvergence {
        levels: u32,
        estimate: f64,
        error: f64,
    },

    #[error("moment n = {n}: {source}")]
    Moment { n: u32, source: Box<Error> },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for numerical failures (as opposed to invalid requests).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::TruncationFailure { .. }
            | Error::QuadratureNonConvergence { .. }
            | Error::SlowConvergence { .. } => true,
            Error::Moment { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    pub(crate) fn domain(function: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            function,
            value,
            domain,
        }
    }
}
