use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain where the quantity is defined.
    #[error("domain error: {what} = {value} (expected {expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("tolerance not met: estimate {estimate:e} with error {error:e} after {subdivisions} subdivisions")]
    ToleranceNotMet {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    /// The root was not bracketed by the search interval.
    #[error("root not bracketed on [{lo}, {hi}] (residuals {f_lo:e}, {f_hi:e})")]
    BracketFailure { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("root finder did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    /// A kernel integral diverges (the evaluation point sits inside the region).
    #[error("kernel integral diverges: {0}")]
    NonIntegrable(String),

    #[error("regions overlap with positive area")]
    NotDisjoint,

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_range(
    what: &'static str,
    value: f64,
    ok: bool,
    expected: &'static str,
) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value,
            expected,
        })
    }
}
