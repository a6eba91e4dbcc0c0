//! Library behind the `nlyoung` binary: sweep tables, verification suites
//! and the error-to-exit-code mapping.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;

pub mod sweep;
pub mod verify;

pub use sweep::{SweepMeta, SweepRow, SweepTable};
pub use verify::{Check, Suite};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags or out-of-range arguments.
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Numerics(#[from] nonlocal_young::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Format(String),

    #[error("{failed} of {total} checks failed (first: {first})")]
    VerificationFailed {
        failed: usize,
        total: usize,
        first: String,
    },
}

impl CliError {
    /// 2 for usage errors, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Checks `s` and `σ` against the solver's domain before any work is done.
pub fn check_angle_args(s: f64, sigma: f64) -> CliResult<()> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(CliError::Usage(format!("s out of range: {s} (expected 0 < s <= 1)")));
    }
    let max = 1.0 - nonlocal_young::angle_solver::SIGMA_EPS;
    if !(sigma.abs() <= max) {
        return Err(CliError::Usage(format!(
            "sigma out of range: {sigma} (expected |sigma| <= {max})"
        )));
    }
    Ok(())
}

/// Quadrature spec with both tolerances set to `tol`.
pub fn spec_for(tol: f64) -> CliResult<nonlocal_young::QuadratureSpec> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(CliError::Usage(format!("tol out of range: {tol} (expected 0 < tol < 1)")));
    }
    Ok(nonlocal_young::QuadratureSpec::with_tolerance(tol)?)
}
