//! Cone interaction integrals for the planar kernel `|z|^(-2-s)`.
//!
//! `I(1, alpha, s)` is the interaction between the point `e2` and the cone of
//! half-opening `alpha` around `-e2`:
//!
//! ```text
//! I(1, alpha, s) = 2 ∫_0^alpha ∫_0^∞ r (r² + 2r cos t + 1)^(-(2+s)/2) dr dt
//! ```
//!
//! The inner radial integral behaves like `1/s` as `s -> 0`, so every routine
//! here splits off that singular part in closed form and integrates only the
//! bounded remainder:
//!
//! * `radial_inner(t, s) = 1/s + κ1(t, s)`
//! * `I(1, alpha, s) = 2 alpha / s + κ2(alpha, s)`, `κ2 = 2 ∫_0^alpha κ1 dt`
//! * `∂s I(1, alpha, s) = -2 alpha / s² + ξ(alpha, s)`
//!
//! The radial integral is split at `r = far_field_cut`; the tail is mapped to
//! `u = cut / r ∈ (0, 1]`, where the integrand becomes
//! `cut^(-s) u^(s-1) G(u)` with `G` smooth and `G(0) = 1`. Integrating
//! `u^(s-1)` exactly leaves a remainder that is `O(u^s)` at the origin.
//!
//! At `s = 1` the public entry points return the closed forms
//! `I = 2 sin a / (1 + cos a)`, `∂a I = 2 / (1 + cos a)` and `∂s I = -H(a)`.

use std::f64::consts::PI;

use crate::error::{check_range, Result};
use crate::quadrature::{integrate_with_breaks, QuadratureSpec};
use crate::special_functions::lemma_h_antiderivative;

/// Largest admissible half-opening of a cone.
pub const ALPHA_MAX: f64 = PI - 1e-6;

/// Half-opening `alpha` and kernel exponent `s` of a cone integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeParams {
    alpha: f64,
    s: f64,
}

impl ConeParams {
    pub fn new(alpha: f64, s: f64) -> Result<Self> {
        check_range("alpha", alpha, alpha > 0.0 && alpha <= ALPHA_MAX, "0 < alpha <= pi - 1e-6")?;
        check_range("s", s, s > 0.0 && s <= 1.0, "0 < s <= 1")?;
        Ok(Self { alpha, s })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn s(&self) -> f64 {
        self.s
    }
}

/// `(cos t, 1 + cos t)` with the second computed without cancellation near `t = pi`.
#[inline]
fn cos_pair(t: f64) -> (f64, f64) {
    let half = (0.5 * t).cos();
    (t.cos(), 2.0 * half * half)
}

/// `e^x - 1 - x` without cancellation for small `x`.
pub(crate) fn expm1_minus_x(x: f64) -> f64 {
    if x.abs() < 0.1 {
        // x²/2! + x³/3! + ... , truncation error below 1e-17 relative
        let mut term = x * x / 2.0;
        let mut sum = term;
        for k in 3..14 {
            term *= x / k as f64;
            sum += term;
        }
        sum
    } else {
        x.exp_m1() - x
    }
}

/// Initial panels for the near-field piece `[0, cut]`. For `t` close to `pi`
/// the integrand peaks at `r = 1` with width about `pi - t`.
fn near_field_breaks(one_plus_cos: f64, cut: f64) -> Vec<f64> {
    let width = (2.0 * one_plus_cos).sqrt();
    let mut pts = vec![0.0, 1.0, cut];
    if width < 0.25 {
        for k in [1.0, 4.0, 16.0] {
            let d = k * width;
            if 1.0 - d > 0.0 {
                pts.push(1.0 - d);
            }
            if 1.0 + d < cut {
                pts.push(1.0 + d);
            }
        }
    }
    pts.sort_by(f64::total_cmp);
    pts
}

/// `(r² + 2r cos t + 1)` evaluated as `(r - 1)² + 2r(1 + cos t)`.
#[inline]
fn quad_form(r: f64, one_plus_cos: f64) -> f64 {
    (r - 1.0) * (r - 1.0) + 2.0 * r * one_plus_cos
}

fn check_radial_args(t: f64, s: f64) -> Result<()> {
    check_range("t", t, (0.0..PI).contains(&t), "0 <= t < pi")?;
    check_range("s", s, s > 0.0 && s <= 1.0, "0 < s <= 1")
}

/// `κ1(t, s) = ∫_0^∞ r (r² + 2r cos t + 1)^(-(2+s)/2) dr - 1/s`, always by
/// quadrature.
pub fn radial_remainder(t: f64, s: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_radial_args(t, s)?;
    spec.validate()?;
    radial_remainder_unchecked(t, s, spec)
}

fn radial_remainder_unchecked(t: f64, s: f64, spec: &QuadratureSpec) -> Result<f64> {
    let (c, one_plus_cos) = cos_pair(t);
    let cut = spec.far_field_cut;
    let expo = -(2.0 + s) / 2.0;

    let near = integrate_with_breaks(
        |r| Ok(r * quad_form(r, one_plus_cos).powf(expo)),
        &near_field_breaks(one_plus_cos, cut),
        spec,
    )?;

    // u^(s-1) (G(u) - 1) with v = u / cut
    let far = integrate_with_breaks(
        |u: f64| {
            let v = u / cut;
            let g_minus_one = (expo * (2.0 * v * c + v * v).ln_1p()).exp_m1();
            Ok(u.powf(s - 1.0) * g_minus_one)
        },
        &[0.0, 1.0],
        spec,
    )?;

    let lambda = cut.ln();
    let cut_pow = (-s * lambda).exp();
    Ok(near.value + cut_pow * far.value + (-s * lambda).exp_m1() / s)
}

/// `∫_0^∞ r (r² + 2r cos t + 1)^(-(2+s)/2) dr` for `t ∈ [0, pi)`, `s ∈ (0, 1]`.
pub fn radial_inner(t: f64, s: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(1.0 / s + radial_remainder(t, s, spec)?)
}

/// `χ2(t, s) = ∫_0^∞ log(r² + 2r cos t + 1) r (r² + 2r cos t + 1)^(-(2+s)/2) dr - 2/s²`.
pub fn log_radial_remainder(t: f64, s: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_radial_args(t, s)?;
    spec.validate()?;
    log_radial_remainder_unchecked(t, s, spec)
}

fn log_radial_remainder_unchecked(t: f64, s: f64, spec: &QuadratureSpec) -> Result<f64> {
    let (c, one_plus_cos) = cos_pair(t);
    let cut = spec.far_field_cut;
    let lambda = cut.ln();
    let expo = -(2.0 + s) / 2.0;

    let near = integrate_with_breaks(
        |r| {
            let x = quad_form(r, one_plus_cos);
            Ok(x.ln() * r * x.powf(expo))
        },
        &near_field_breaks(one_plus_cos, cut),
        spec,
    )?;

    let far = integrate_with_breaks(
        |u: f64| {
            let v = u / cut;
            let ell = (2.0 * v * c + v * v).ln_1p();
            let g_minus_one = (expo * ell).exp_m1();
            let log_part = 2.0 * lambda - 2.0 * u.ln();
            Ok(u.powf(s - 1.0) * (g_minus_one * log_part + (1.0 + g_minus_one) * ell))
        },
        &[0.0, 1.0],
        spec,
    )?;

    // cut^(-s) (2 lambda / s + 2 / s²) - 2 / s², rearranged
    let e = (-s * lambda).exp_m1();
    let singular = 2.0 * expm1_minus_x(-s * lambda) / (s * s) + 2.0 * lambda * e / s;
    Ok(near.value + (1.0 + e) * far.value + singular)
}

/// Panel boundaries in `t` for the angular integral on `[0, alpha]`; graded
/// toward `pi` where the radial integrand concentrates.
fn angular_breaks(alpha: f64) -> Vec<f64> {
    let mut pts = vec![0.0, alpha];
    if alpha > 0.5 * PI {
        pts.push(0.5 * PI);
        let delta = PI - alpha;
        let mut d = 2.0 * delta;
        while PI - d > 0.5 * PI {
            pts.push(PI - d);
            d *= 4.0;
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Quadrature routes with no closed-form dispatch at `s = 1`.
pub mod by_quadrature {
    use super::*;

    /// `κ2(alpha, s) = I(1, alpha, s) - 2 alpha / s`.
    pub fn cone_remainder(p: ConeParams, spec: &QuadratureSpec) -> Result<f64> {
        spec.validate()?;
        let inner = spec.nested();
        let est = integrate_with_breaks(
            |t| radial_remainder_unchecked(t, p.s, &inner),
            &angular_breaks(p.alpha),
            spec,
        )?;
        Ok(2.0 * est.value)
    }

    /// `ξ(alpha, s) = ∂s I(1, alpha, s) + 2 alpha / s²`.
    pub fn cone_ds_remainder(p: ConeParams, spec: &QuadratureSpec) -> Result<f64> {
        spec.validate()?;
        let inner = spec.nested();
        let est = integrate_with_breaks(
            |t| log_radial_remainder_unchecked(t, p.s, &inner),
            &angular_breaks(p.alpha),
            spec,
        )?;
        Ok(-est.value)
    }

    pub fn cone_integral(p: ConeParams, spec: &QuadratureSpec) -> Result<f64> {
        Ok(2.0 * p.alpha / p.s + cone_remainder(p, spec)?)
    }

    pub fn cone_integral_ds(p: ConeParams, spec: &QuadratureSpec) -> Result<f64> {
        Ok(-2.0 * p.alpha / (p.s * p.s) + cone_ds_remainder(p, spec)?)
    }

    pub fn cone_integral_dalpha(p: ConeParams, spec: &QuadratureSpec) -> Result<f64> {
        Ok(2.0 * radial_inner(p.alpha, p.s, spec)?)
    }
}

/// `κ2(alpha, s)`; closed form `2 tan(alpha/2) - 2 alpha` at `s = 1`.
pub fn cone_remainder(p: ConeParams, spec: &QuadratureSpec) -> Result<f64> {
    if p.s == 1.0 {
        Ok(2.0 * (0.5 * p.alpha).tan() - 2.0 * p.alpha)
    } else {
        by_quadrature::cone_remainder(p, spec)
    }
}

/// `ξ(alpha, s) = ∂s I + 2 alpha / s²`; closed form `2 alpha - H(alpha)` at `s = 1`.
pub fn cone_ds_remainder(p: ConeParams, spec: &QuadratureSpec) -> Result<f64> {
    if p.s == 1.0 {
        Ok(2.0 * p.alpha - lemma_h_antiderivative(p.alpha))
    } else {
        by_quadrature::cone_ds_remainder(p, spec)
    }
}

/// `I(1, alpha, s)`.
pub fn cone_integral(p: ConeParams, spec: &QuadratureSpec) -> Result<f64> {
    if p.s == 1.0 {
        let (sin, cos) = p.alpha.sin_cos();
        Ok(2.0 * sin / (1.0 + cos))
    } else {
        by_quadrature::cone_integral(p, spec)
    }
}

/// `∂s I(1, alpha, s)`.
pub fn cone_integral_ds(p: ConeParams, spec: &QuadratureSpec) -> Result<f64> {
    if p.s == 1.0 {
        Ok(-lemma_h_antiderivative(p.alpha))
    } else {
        by_quadrature::cone_integral_ds(p, spec)
    }
}

/// `∂alpha I(1, alpha, s) = 2 radial_inner(alpha, s)`.
pub fn cone_integral_dalpha(p: ConeParams, spec: &QuadratureSpec) -> Result<f64> {
    if p.s == 1.0 {
        Ok(2.0 / cos_pair(p.alpha).1)
    } else {
        by_quadrature::cone_integral_dalpha(p, spec)
    }
}
