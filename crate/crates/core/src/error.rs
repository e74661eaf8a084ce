use thiserror::Error;

/// Errors raised by the accounting routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FdpError {
    /// A parameter lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The caller broke a documented precondition (unsorted input, asymmetric curve, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// An iterative routine stopped before meeting its tolerance.
    #[error("{what} did not converge after {iterations} iterations (partial estimate {estimate}, error estimate {error})")]
    NotConverged {
        what: &'static str,
        iterations: usize,
        estimate: f64,
        error: f64,
    },

    /// The Berry-Esseen bracket is vacuous for these inputs.
    #[error("CLT not applicable: {0}")]
    CltNotApplicable(String),

    /// A search over a bounded range found nothing.
    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, FdpError>;

impl From<serde_json::Error> for FdpError {
    fn from(e: serde_json::Error) -> Self {
        FdpError::Serialization(e.to_string())
    }
}

impl From<csv::Error> for FdpError {
    fn from(e: csv::Error) -> Self {
        FdpError::Serialization(e.to_string())
    }
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(FdpError::Domain(msg.into()))
}

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(FdpError::Contract(msg.into()))
}

pub(crate) fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        domain(format!("{name} = {p} is not in [0, 1]"))
    }
}

pub(crate) fn check_nonnegative(name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && !x.is_nan() {
        Ok(())
    } else {
        domain(format!("{name} = {x} must be non-negative"))
    }
}
