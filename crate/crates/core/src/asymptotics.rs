//! First-order expansions of `θ(s, σ)` at `s = 1` and `s = 0`.
//!
//! ```text
//! θ(s, σ) = arccos(-σ) + c1(σ) (1 - s) + o(1 - s)
//! θ(s, σ) = (pi/2)(1 + σ) + c0(σ) s + o(s)
//! ```
//!
//! with
//!
//! ```text
//! c1(σ) = -[2σ log 2 + (1 - σ) log(1 - σ) - (1 + σ) log(1 + σ)] / (2 sqrt(1 - σ²))
//! c0(σ) = -[(pi/2)(1 + σ) log cos(pi σ / 2) - Ξ((pi/2)(1 + σ)) + (1 + σ) Ξ(pi/2)]
//! ```

use std::f64::consts::{FRAC_PI_2, LN_2};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle_solver::{solve_theta, AngleQuery, SIGMA_EPS};
use crate::error::{check_range, Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::special_functions::{xi, XiDomain, XI_HALF_PI};

/// Offsets used by [`slope_check`] unless the caller supplies its own.
pub const DEFAULT_OFFSETS: [f64; 5] = [0.1, 0.03, 0.01, 0.003, 0.001];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `s -> 1`; the slope multiplies `1 - s`.
    AtOne,
    /// `s -> 0`; the slope multiplies `s`.
    AtZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionCoefficients {
    pub regime: Regime,
    pub theta0: f64,
    pub slope: f64,
}

impl ExpansionCoefficients {
    /// Truncated expansion evaluated at `s`.
    pub fn evaluate(&self, s: f64) -> f64 {
        match self.regime {
            Regime::AtOne => self.theta0 + self.slope * (1.0 - s),
            Regime::AtZero => self.theta0 + self.slope * s,
        }
    }
}

/// Expansion about `s = 1`.
pub fn expand_at_one(sigma: f64) -> Result<ExpansionCoefficients> {
    check_range("sigma", sigma, sigma.abs() < 1.0, "|sigma| < 1")?;
    let numerator = 2.0 * sigma * LN_2 + (1.0 - sigma) * (-sigma).ln_1p()
        - (1.0 + sigma) * sigma.ln_1p();
    let root = ((1.0 - sigma) * (1.0 + sigma)).sqrt();
    Ok(ExpansionCoefficients {
        regime: Regime::AtOne,
        theta0: (-sigma).acos(),
        slope: -numerator / (2.0 * root),
    })
}

/// Expansion about `s = 0`.
pub fn expand_at_zero(sigma: f64, spec: &QuadratureSpec) -> Result<ExpansionCoefficients> {
    check_range(
        "sigma",
        sigma,
        sigma.abs() <= 1.0 - SIGMA_EPS,
        "|sigma| <= 1 - 1e-6",
    )?;
    let theta0 = FRAC_PI_2 * (1.0 + sigma);
    let slope = if sigma == 0.0 {
        0.0
    } else {
        let xi_theta0 = xi(XiDomain::new(theta0)?, spec)?;
        -(theta0 * (FRAC_PI_2 * sigma).cos().ln() - xi_theta0 + (1.0 + sigma) * XI_HALF_PI)
    };
    Ok(ExpansionCoefficients {
        regime: Regime::AtZero,
        theta0,
        slope,
    })
}

/// Expansion for the given regime.
pub fn expand(regime: Regime, sigma: f64, spec: &QuadratureSpec) -> Result<ExpansionCoefficients> {
    match regime {
        Regime::AtOne => expand_at_one(sigma),
        Regime::AtZero => expand_at_zero(sigma, spec),
    }
}

/// One row of a slope convergence study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopePoint {
    pub h: f64,
    pub empirical_slope: f64,
    pub analytic_slope: f64,
    pub gap: f64,
}

/// Compares the difference quotient of the solved angle at distance `h` from
/// the endpoint with the analytic slope, for each `h` in `h_values`.
///
/// `h_values` must lie in `(0, 0.2]` and be strictly descending. The solves
/// run in parallel; rows come back in input order.
pub fn slope_check(
    regime: Regime,
    sigma: f64,
    h_values: &[f64],
    spec: &QuadratureSpec,
) -> Result<Vec<SlopePoint>> {
    if h_values.is_empty() {
        return Err(Error::InvalidArgument("no offsets given".into()));
    }
    for &h in h_values {
        check_range("h", h, h > 0.0 && h <= 0.2, "0 < h <= 0.2")?;
    }
    if h_values.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument(
            "offsets must be strictly descending".into(),
        ));
    }
    let coeffs = expand(regime, sigma, spec)?;
    h_values
        .par_iter()
        .map(|&h| {
            let s = match regime {
                Regime::AtOne => 1.0 - h,
                Regime::AtZero => h,
            };
            let theta = solve_theta(AngleQuery::new(s, sigma)?, spec)?.theta;
            let empirical_slope = (theta - coeffs.theta0) / h;
            Ok(SlopePoint {
                h,
                empirical_slope,
                analytic_slope: coeffs.slope,
                gap: (empirical_slope - coeffs.slope).abs(),
            })
        })
        .collect()
}

/// True when every gap is smaller than the one before it.
pub fn gaps_decrease(points: &[SlopePoint]) -> bool {
    points.windows(2).all(|w| w[1].gap < w[0].gap)
}
