//! The fractional Young's law `f(s, θ) = 1 + σ` and its solution `θ(s, σ)`.
//!
//! With `I(α) = I(1, α, s) = 2α/s + K(α)` and `K̄ = K(pi/2)`,
//!
//! ```text
//! f(s, α) = sin(α)^s I(α) / I(pi/2) = sin(α)^s (2α + sK(α)) / (pi + sK̄)
//! ```
//!
//! The second form stays well conditioned as `s -> 0`. The law satisfies
//! `f(s, pi - α) = 2 - f(s, α)`, so the solver only searches `(0, pi/2]`.

use std::cell::OnceCell;
use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use crate::error::{check_range, Result};
use crate::kernel_integrals::{
    cone_ds_remainder, cone_remainder, radial_remainder, ConeParams, ALPHA_MAX,
};
use crate::quadrature::QuadratureSpec;
use crate::roots::brent;

/// Distance of `|σ|` from 1 below which queries are refused.
pub const SIGMA_EPS: f64 = 1e-6;

/// Values of `s` within this distance of 0 or 1 are answered by the limit angle.
pub const S_ENDPOINT: f64 = 1e-9;

/// Absolute tolerance on `θ` for the root finder.
pub const THETA_XTOL: f64 = 1e-12;

const MAX_ITERATIONS: usize = 200;

/// A point `(s, σ)` at which to evaluate the contact angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleQuery {
    s: f64,
    sigma: f64,
}

impl AngleQuery {
    /// Requires `0 < s <= 1` and `|σ| <= 1 - 1e-6`.
    pub fn new(s: f64, sigma: f64) -> Result<Self> {
        check_range("s", s, s > 0.0 && s <= 1.0, "0 < s <= 1")?;
        check_range(
            "sigma",
            sigma,
            sigma.abs() <= 1.0 - SIGMA_EPS,
            "|sigma| <= 1 - 1e-6",
        )?;
        Ok(Self { s, sigma })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSolution {
    /// Contact angle in radians.
    pub theta: f64,
    /// `|f(s, θ) - (1 + σ)|` at the returned angle.
    pub residual: f64,
    pub iterations: usize,
    /// `∂α f(s, θ)`.
    pub f_alpha: f64,
}

/// `f(s, ·)` and its derivatives for one fixed `s`.
///
/// The normalising cone integral `I(1, pi/2, s)` is computed once on
/// construction and reused for every angle; its `s`-derivative is computed
/// the first time [`ContactLaw::ds`] needs it.
#[derive(Debug, Clone)]
pub struct ContactLaw {
    s: f64,
    spec: QuadratureSpec,
    /// `K(pi/2)`
    k_half: f64,
    /// `∂s I(pi/2) + pi/s²`
    x_half: OnceCell<f64>,
}

impl ContactLaw {
    pub fn new(s: f64, spec: &QuadratureSpec) -> Result<Self> {
        check_range("s", s, s > 0.0 && s <= 1.0, "0 < s <= 1")?;
        spec.validate()?;
        let k_half = cone_remainder(ConeParams::new(FRAC_PI_2, s)?, spec)?;
        Ok(Self {
            s,
            spec: *spec,
            k_half,
            x_half: OnceCell::new(),
        })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    fn cone(&self, alpha: f64) -> Result<ConeParams> {
        check_range("alpha", alpha, alpha > 0.0 && alpha <= ALPHA_MAX, "0 < alpha <= pi - 1e-6")?;
        ConeParams::new(alpha, self.s)
    }

    /// `pi + s K̄ = s I(1, pi/2, s)`.
    fn denominator(&self) -> f64 {
        PI + self.s * self.k_half
    }

    fn x_half(&self) -> Result<f64> {
        if let Some(v) = self.x_half.get() {
            return Ok(*v);
        }
        let v = cone_ds_remainder(ConeParams::new(FRAC_PI_2, self.s)?, &self.spec)?;
        Ok(*self.x_half.get_or_init(|| v))
    }

    /// `f(s, α)`.
    pub fn value(&self, alpha: f64) -> Result<f64> {
        let p = self.cone(alpha)?;
        if self.s == 1.0 {
            return Ok(one_minus_cos(alpha));
        }
        let s = self.s;
        let k = cone_remainder(p, &self.spec)?;
        Ok(alpha.sin().powf(s) * (2.0 * alpha + s * k) / self.denominator())
    }

    /// `∂α f(s, α)`.
    pub fn dalpha(&self, alpha: f64) -> Result<f64> {
        let p = self.cone(alpha)?;
        if self.s == 1.0 {
            return Ok(alpha.sin());
        }
        let s = self.s;
        let (sin, cos) = alpha.sin_cos();
        let k = cone_remainder(p, &self.spec)?;
        let k1 = radial_remainder(alpha, s, &self.spec)?;
        let sin_s = sin.powf(s);
        let num = s * sin_s / sin * cos * (2.0 * alpha + s * k) + sin_s * (2.0 + 2.0 * s * k1);
        Ok(num / self.denominator())
    }

    /// `∂s f(s, α)`.
    ///
    /// The quotient-rule term `∂s [I(α) / I(pi/2)]` is expanded in powers of
    /// `s` so that the `1/s³` parts cancel analytically.
    pub fn ds(&self, alpha: f64) -> Result<f64> {
        let p = self.cone(alpha)?;
        let sin = alpha.sin();
        if self.s == 1.0 {
            return Ok(one_minus_cos(alpha) * (sin.ln() - LN_2) - (1.0 + alpha.cos()).ln() + LN_2);
        }
        let s = self.s;
        let k = cone_remainder(p, &self.spec)?;
        let x = cone_ds_remainder(p, &self.spec)?;
        let (kb, xb) = (self.k_half, self.x_half()?);
        let d = self.denominator();
        let sin_s = sin.powf(s);
        let log_term = sin_s * sin.ln() * (2.0 * alpha + s * k) / d;
        let quotient = PI * k - 2.0 * alpha * kb
            + s * (PI * x - 2.0 * alpha * xb)
            + s * s * (x * kb - k * xb);
        Ok(log_term + sin_s * quotient / (d * d))
    }

    /// Root of `f(s, α) = 1 + σ` on `(0, pi/2]` for `σ <= 0`.
    fn solve_nonpositive(&self, sigma: f64) -> Result<(f64, f64, usize)> {
        let target = 1.0 + sigma;
        // f(s, 0) = 0 and f(s, pi/2) = 1
        let root = brent(
            |a| Ok(self.value(a)? - target),
            0.0,
            FRAC_PI_2,
            -target,
            -sigma,
            THETA_XTOL,
            MAX_ITERATIONS,
        )?;
        Ok((root.x, root.fx.abs(), root.iterations))
    }
}

/// `1 - cos α` without cancellation at small `α`.
fn one_minus_cos(alpha: f64) -> f64 {
    let h = (0.5 * alpha).sin();
    2.0 * h * h
}

/// `f(s, α) = sin(α)^s I(1, α, s) / I(1, pi/2, s)`; exactly `1 - cos α` at `s = 1`.
pub fn f_value(s: f64, alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
    ContactLaw::new(s, spec)?.value(alpha)
}

/// `∂α f(s, α)`; exactly `sin α` at `s = 1`.
pub fn f_dalpha(s: f64, alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
    ContactLaw::new(s, spec)?.dalpha(alpha)
}

/// `∂s f(s, α)`.
pub fn f_ds(s: f64, alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
    ContactLaw::new(s, spec)?.ds(alpha)
}

/// Limit angle used when `s` is within [`S_ENDPOINT`] of 0 or 1.
fn endpoint_angle(s: f64, sigma: f64) -> Option<f64> {
    if s >= 1.0 - S_ENDPOINT {
        Some((-sigma).acos())
    } else if s <= S_ENDPOINT {
        Some(FRAC_PI_2 * (1.0 + sigma))
    } else {
        None
    }
}

fn solve_with(law: &ContactLaw, sigma: f64) -> Result<AngleSolution> {
    if let Some(theta) = endpoint_angle(law.s, sigma) {
        let residual = (law.value(theta)? - (1.0 + sigma)).abs();
        return Ok(AngleSolution {
            theta,
            residual,
            iterations: 0,
            f_alpha: law.dalpha(theta)?,
        });
    }
    if sigma == 0.0 {
        return Ok(AngleSolution {
            theta: FRAC_PI_2,
            residual: 0.0,
            iterations: 0,
            f_alpha: law.dalpha(FRAC_PI_2)?,
        });
    }
    let (root, residual, iterations) = law.solve_nonpositive(-sigma.abs())?;
    // f(s, pi - α) = 2 - f(s, α), and ∂α f is even about pi/2
    let theta = if sigma > 0.0 { PI - root } else { root };
    Ok(AngleSolution {
        theta,
        residual,
        iterations,
        f_alpha: law.dalpha(root)?,
    })
}

/// Solves `f(s, θ) = 1 + σ` for `θ ∈ (0, pi)`.
pub fn solve_theta(q: AngleQuery, spec: &QuadratureSpec) -> Result<AngleSolution> {
    solve_with(&ContactLaw::new(q.s, spec)?, q.sigma)
}

/// `∂σ θ(s, σ) = 1 / ∂α f(s, θ)`.
pub fn dtheta_dsigma(q: AngleQuery, spec: &QuadratureSpec) -> Result<f64> {
    Ok(1.0 / solve_theta(q, spec)?.f_alpha)
}

/// `∂s θ(s, σ) = -∂s f(s, θ) / ∂α f(s, θ)`.
pub fn dtheta_ds(q: AngleQuery, spec: &QuadratureSpec) -> Result<f64> {
    let s = if q.s >= 1.0 - S_ENDPOINT { 1.0 } else { q.s };
    let law = ContactLaw::new(s, spec)?;
    let sol = solve_with(&law, q.sigma)?;
    Ok(-law.ds(sol.theta)? / sol.f_alpha)
}
