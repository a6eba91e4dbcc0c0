//! Closed-form auxiliary functions for the contact-angle expansions.
//!
//! Trigonometric quotients are always written with `sin` and `cos`; `tan` is
//! never evaluated, so `t = pi/2` needs no special handling.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use crate::error::{check_range, Result};
use crate::quadrature::{integrate_with_breaks, QuadratureSpec};

/// Distance from `pi` below which `Ξ` is refused.
pub const XI_DELTA: f64 = 1e-6;

/// `Ξ(pi/2) = (pi/2) log 2`.
pub const XI_HALF_PI: f64 = FRAC_PI_2 * LN_2;

/// Largest `|a|` accepted by [`lemma_h`].
pub const LEMMA_H_MAX_ABS: f64 = 1.0 - 1e-8;

/// Upper limit of `Ξ`, restricted to `[0, pi - 1e-6]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiDomain(f64);

impl XiDomain {
    pub fn new(alpha: f64) -> Result<Self> {
        check_range(
            "alpha",
            alpha,
            (0.0..=PI - XI_DELTA).contains(&alpha),
            "0 <= alpha <= pi - 1e-6",
        )?;
        Ok(Self(alpha))
    }

    pub fn alpha(&self) -> f64 {
        self.0
    }
}

/// `t cos t / sin t`, equal to 1 at `t = 0`.
#[inline]
fn t_cot_t(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        t * t.cos() / t.sin()
    }
}

/// `sin d - d cos d` without cancellation for small `d`.
fn sin_minus_d_cos(d: f64) -> f64 {
    if d < 0.1 {
        let d2 = d * d;
        d * d2 * (1.0 / 3.0 - d2 * (1.0 / 30.0 - d2 * (1.0 / 840.0 - d2 / 45360.0)))
    } else {
        d.sin() - d * d.cos()
    }
}

/// `t cot t + pi / (pi - t)`, bounded on `[pi/2, pi)`.
#[inline]
fn regularized_t_cot_t(t: f64) -> f64 {
    let d = PI - t;
    let (sin, cos) = d.sin_cos();
    // t cot t = -(pi - d) cot d, and pi/d - pi cot d = pi (sin d - d cos d) / (d sin d)
    PI * sin_minus_d_cos(d) / (d * sin) + d * cos / sin
}

/// `Ξ(alpha) = ∫_0^alpha t cos t / sin t dt`.
///
/// Beyond `pi/2` the pole `-pi / (pi - t)` is integrated in closed form.
pub fn xi(alpha: XiDomain, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    let a = alpha.0;
    if a <= FRAC_PI_2 {
        return Ok(integrate_with_breaks(|t| Ok(t_cot_t(t)), &[0.0, a], spec)?.value);
    }
    let head = integrate_with_breaks(|t| Ok(t_cot_t(t)), &[0.0, FRAC_PI_2], spec)?.value;
    let mut breaks = vec![FRAC_PI_2, a];
    let mut d = 2.0 * (PI - a);
    while PI - d > FRAC_PI_2 {
        breaks.push(PI - d);
        d *= 4.0;
    }
    breaks.sort_by(f64::total_cmp);
    let body = integrate_with_breaks(|t| Ok(regularized_t_cot_t(t)), &breaks, spec)?.value;
    Ok(head + body - PI * (FRAC_PI_2 / (PI - a)).ln())
}

/// `h(a) = (2a(1 - log 2 + log(a + 1)) - 2) / (a² - 1)` for `|a| <= 1 - 1e-8`.
///
/// Equals `∫_0^∞ r log(r² + 2ar + 1) (r² + 2ar + 1)^(-3/2) dr`.
pub fn lemma_h(a: f64) -> Result<f64> {
    check_range("a", a, a.abs() <= LEMMA_H_MAX_ABS, "|a| <= 1 - 1e-8")?;
    Ok((2.0 * a * (1.0 - LN_2 + a.ln_1p()) - 2.0) / (a * a - 1.0))
}

/// `H(alpha) = (4(1 - cos a) + 2(log(cos a + 1) - log 2)) / sin a` on `(0, pi/2]`.
#[allow(non_snake_case)]
pub fn lemma_H(alpha: f64) -> Result<f64> {
    check_range("alpha", alpha, alpha > 0.0 && alpha <= FRAC_PI_2, "0 < alpha <= pi/2")?;
    Ok(lemma_h_antiderivative(alpha))
}

/// `H` on all of `(0, pi)`, in the cancellation-free form
/// `(8 sin²(a/2) + 4 log cos(a/2)) / sin a`.
pub(crate) fn lemma_h_antiderivative(alpha: f64) -> f64 {
    let (sh, ch) = (0.5 * alpha).sin_cos();
    (8.0 * sh * sh + 4.0 * ch.ln()) / alpha.sin()
}

/// `κ1(t, 0) = -t cos t / sin t` on `[0, pi/2]`; returns the limit `-1` at `t = 0`.
pub fn kappa1_at_zero(t: f64) -> Result<f64> {
    check_range("t", t, (0.0..=FRAC_PI_2).contains(&t), "0 <= t <= pi/2")?;
    Ok(-t_cot_t(t))
}

/// `κ2(alpha, 0) = -2 Ξ(alpha)` on `(0, pi/2]`.
pub fn kappa2_at_zero(alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_range("alpha", alpha, alpha > 0.0 && alpha <= FRAC_PI_2, "0 < alpha <= pi/2")?;
    Ok(-2.0 * xi(XiDomain::new(alpha)?, spec)?)
}

/// `(φ(r, t), ψ(r, t))` with
///
/// ```text
/// φ = atan((cos t + r) / sin t) cos t / sin t - (1/2) log((r² + 2r cos t + 1) / r²)
/// ψ = log r - φ = (1/2) log(r² + 2r cos t + 1) - atan((cos t + r) / sin t) cos t / sin t
/// ```
///
/// At `r = 0`, `φ` is `-inf` and `ψ` is finite.
pub fn phi_psi(r: f64, t: f64) -> Result<(f64, f64)> {
    check_range("r", r, r >= 0.0, "r >= 0")?;
    check_range("t", t, t > 0.0 && t < PI, "0 < t < pi")?;
    let (sin, cos) = t.sin_cos();
    let arc = ((cos + r) / sin).atan() * cos / sin;
    let log_x = (r * (r + 2.0 * cos)).ln_1p();
    let psi = 0.5 * log_x - arc;
    let phi = if r == 0.0 {
        f64::NEG_INFINITY
    } else {
        arc - 0.5 * log_x + r.ln()
    };
    Ok((phi, psi))
}

/// `φ(+∞, t) = (pi/2) cos t / sin t`.
pub fn phi_at_infinity(t: f64) -> Result<f64> {
    check_range("t", t, t > 0.0 && t < PI, "0 < t < pi")?;
    Ok(FRAC_PI_2 * t.cos() / t.sin())
}

/// `κ0(t, 0) = φ(1, t) - φ(+∞, t)`.
pub fn kappa0_at_zero(t: f64) -> Result<f64> {
    Ok(phi_psi(1.0, t)?.0 - phi_at_infinity(t)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel_integrals::{
        by_quadrature, cone_integral, log_radial_remainder, radial_remainder, ConeParams,
    };
    use crate::quadrature::integrate;
    use proptest::prelude::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for i in 1..n {
            acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn xi_at_half_pi() {
        let v = xi(XiDomain::new(FRAC_PI_2).unwrap(), &spec()).unwrap();
        assert!((v - XI_HALF_PI).abs() < 1e-12, "{v}");
        assert!((XI_HALF_PI - 1.0887930451518).abs() < 1e-12);
    }

    #[test]
    fn xi_at_zero_is_zero() {
        assert_eq!(xi(XiDomain::new(0.0).unwrap(), &spec()).unwrap(), 0.0);
    }

    #[test]
    fn xi_matches_simpson_oracle() {
        let a = PI / 4.0;
        let oracle = simpson(t_cot_t, 0.0, a, 1_000_000);
        let v = xi(XiDomain::new(a).unwrap(), &spec()).unwrap();
        assert!((v - oracle).abs() < 1e-12, "{v} vs {oracle}");
    }

    #[test]
    fn xi_beyond_half_pi_matches_simpson_oracle() {
        for a in [2.0, 2.8] {
            let oracle = simpson(t_cot_t, 0.0, a, 1_000_000);
            let v = xi(XiDomain::new(a).unwrap(), &spec()).unwrap();
            assert!((v - oracle).abs() < 1e-10, "{a}: {v} vs {oracle}");
        }
        // close to pi, t cot t = -π/(π - t) + 1 + O(π - t)
        let near = xi(XiDomain::new(PI - 1e-6).unwrap(), &spec()).unwrap();
        let nearer = xi(XiDomain::new(PI - 1e-3).unwrap(), &spec()).unwrap();
        assert!(((near - nearer) - PI * (1e-6f64 / 1e-3).ln() - 1e-3).abs() < 1e-5);
    }

    #[test]
    fn xi_domain() {
        assert!(XiDomain::new(PI).is_err());
        assert!(XiDomain::new(PI - 1e-7).is_err());
        assert!(XiDomain::new(-1e-3).is_err());
        assert!(XiDomain::new(f64::NAN).is_err());
    }

    #[test]
    fn xi_is_increasing_on_first_quadrant() {
        let mut prev = 0.0;
        for k in 1..=20 {
            let a = FRAC_PI_2 * k as f64 / 20.0;
            let v = xi(XiDomain::new(a).unwrap(), &spec()).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn lemma_h_values() {
        assert_eq!(lemma_h(0.0).unwrap(), 2.0);
        let expected = (1.0 * (1.0 - LN_2 + 1.5f64.ln()) - 2.0) / (-0.75);
        assert!((lemma_h(0.5).unwrap() - expected).abs() < 1e-15);
        assert!(lemma_h(1.0).is_err());
        assert!(lemma_h(-1.0).is_err());
        assert!(lemma_h(1.0 - 1e-9).is_err());
    }

    #[test]
    fn lemma_h_is_log_weighted_radial_integral() {
        for a in [-0.8, -0.3, 0.0, 0.3, 0.9] {
            let t = f64::acos(a);
            let q = log_radial_remainder(t, 1.0, &spec()).unwrap() + 2.0;
            assert!((q - lemma_h(a).unwrap()).abs() < 1e-8, "a={a}");
        }
    }

    #[test]
    fn lemma_big_h_values() {
        assert!((lemma_H(FRAC_PI_2).unwrap() - (4.0 - 2.0 * LN_2)).abs() < 1e-15);
        assert!(lemma_H(1e-8).unwrap().abs() < 1e-7);
        assert!(lemma_H(0.0).is_err());
        assert!(lemma_H(2.0).is_err());
        let a = PI / 3.0;
        let direct = (4.0 * (1.0 - a.cos()) + 2.0 * ((a.cos() + 1.0).ln() - LN_2)) / a.sin();
        assert!((lemma_H(a).unwrap() - direct).abs() < 1e-15);
    }

    #[test]
    fn lemma_big_h_derivative_is_lemma_h() {
        let h = 1e-5;
        for k in 1..=50 {
            let a = 0.05 + (FRAC_PI_2 - 0.1) * (k - 1) as f64 / 49.0;
            let fd = (lemma_H(a + h).unwrap() - lemma_H(a - h).unwrap()) / (2.0 * h);
            assert!((fd - lemma_h(a.cos()).unwrap()).abs() < 1e-6, "a={a}");
        }
    }

    #[test]
    fn lemma_big_h_matches_quadrature_of_lemma_h() {
        // H(a) = ∫_0^a h(cos t) dt
        for a in [0.2, 0.9, FRAC_PI_2] {
            let q = integrate(|t| lemma_h(t.cos()), 0.0, a, &spec()).unwrap().value;
            assert!((q - lemma_H(a).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn antiderivative_extends_past_half_pi() {
        for a in [2.0, 2.7] {
            let q = integrate(|t| lemma_h(t.cos()), 0.0, a, &spec()).unwrap().value;
            assert!((q - lemma_h_antiderivative(a)).abs() < 1e-9);
        }
    }

    #[test]
    fn kappa1_values() {
        assert!(kappa1_at_zero(FRAC_PI_2).unwrap().abs() < 1e-15);
        assert!((kappa1_at_zero(PI / 4.0).unwrap() + PI / 4.0).abs() < 1e-15);
        assert_eq!(kappa1_at_zero(0.0).unwrap(), -1.0);
        assert!(kappa1_at_zero(2.0).is_err());
    }

    #[test]
    fn kappa1_matches_small_s_remainder() {
        for t in [0.2, PI / 3.0, 1.2, FRAC_PI_2] {
            let k = radial_remainder(t, 1e-4, &spec()).unwrap();
            assert!((k - kappa1_at_zero(t).unwrap()).abs() < 1e-3, "t={t}");
        }
    }

    #[test]
    fn kappa2_values() {
        let v = kappa2_at_zero(FRAC_PI_2, &spec()).unwrap();
        assert!((v + PI * LN_2).abs() < 1e-12);
        assert!(kappa2_at_zero(1e-9, &spec()).unwrap().abs() < 1e-8);
        assert!(kappa2_at_zero(0.0, &spec()).is_err());
    }

    #[test]
    fn kappa2_matches_small_s_cone_remainder() {
        let (a, s) = (PI / 4.0, 1e-4);
        let p = ConeParams::new(a, s).unwrap();
        let extrapolated = cone_integral(p, &spec()).unwrap() - 2.0 * a / s;
        assert!((extrapolated - kappa2_at_zero(a, &spec()).unwrap()).abs() < 1e-2);
        let direct = by_quadrature::cone_remainder(p, &spec()).unwrap();
        assert!((direct - kappa2_at_zero(a, &spec()).unwrap()).abs() < 1e-2);
    }

    #[test]
    fn kappa2_is_twice_integral_of_kappa1() {
        for a in [0.3, 1.0, FRAC_PI_2] {
            let q = integrate(kappa1_at_zero, 0.0, a, &spec()).unwrap().value;
            assert!((2.0 * q - kappa2_at_zero(a, &spec()).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn psi_difference_is_inner_integral() {
        for t in [0.4, FRAC_PI_2, 2.5] {
            let q = integrate(
                |r| Ok(r / (r * r + 2.0 * r * t.cos() + 1.0)),
                0.0,
                1.0,
                &spec(),
            )
            .unwrap()
            .value;
            let (_, p1) = phi_psi(1.0, t).unwrap();
            let (phi0, p0) = phi_psi(0.0, t).unwrap();
            assert_eq!(phi0, f64::NEG_INFINITY);
            assert!((p1 - p0 - q).abs() < 1e-12);
        }
    }

    #[test]
    fn phi_and_psi_derivatives() {
        let (r, t, h) = (2.0, PI / 3.0, 1e-5);
        let x = r * r + 2.0 * r * t.cos() + 1.0;
        let (pp, sp) = phi_psi(r + h, t).unwrap();
        let (pm, sm) = phi_psi(r - h, t).unwrap();
        assert!(((pp - pm) / (2.0 * h) - (2.0 * t.cos() + 1.0 / r) / x).abs() < 1e-8);
        assert!(((sp - sm) / (2.0 * h) - r / x).abs() < 1e-8);
    }

    #[test]
    fn phi_tends_to_its_limit() {
        let t = 1.1;
        let far = phi_psi(1e8, t).unwrap().0;
        assert!((far - phi_at_infinity(t).unwrap()).abs() < 1e-7);
    }

    #[test]
    fn kappa0_matches_quadrature() {
        let t = PI / 4.0;
        // -∫_1^∞ (2 cos t + 1/r) / (r² + 2r cos t + 1) dr, mapped by r = 1/u
        let q = integrate(
            |u: f64| {
                let r = 1.0 / u;
                Ok(-(2.0 * t.cos() + u) / (r * r + 2.0 * r * t.cos() + 1.0) / (u * u))
            },
            0.0,
            1.0,
            &spec(),
        )
        .unwrap()
        .value;
        assert!((kappa0_at_zero(t).unwrap() - q).abs() < 1e-8);
    }

    #[test]
    fn fractional_part_identity() {
        for k in 1..100 {
            let t = PI * k as f64 / 100.0;
            let lhs = (t.cos() / t.sin()).atan() - FRAC_PI_2;
            assert!((lhs + t).abs() < 1e-13, "t={t}");
        }
    }

    #[test]
    fn kappa1_closed_form_chain() {
        // κ1(t,0) = atan(cot t) cot t - φ(∞, t)
        for t in [0.3f64, 1.0, 1.5] {
            let chain = (t.cos() / t.sin()).atan() * t.cos() / t.sin() - phi_at_infinity(t).unwrap();
            assert!((chain - kappa1_at_zero(t).unwrap()).abs() < 1e-13);
        }
    }

    proptest! {
        #[test]
        fn lemma_h_is_finite_inside(a in -0.999f64..0.999) {
            prop_assert!(lemma_h(a).unwrap().is_finite());
        }

        #[test]
        fn psi_minus_log_r_is_minus_phi(r in 1e-3f64..1e3, t in 0.01f64..3.13) {
            let (phi, psi) = phi_psi(r, t).unwrap();
            prop_assert!((psi - (r.ln() - phi)).abs() < 1e-9 * (1.0 + phi.abs()));
        }
    }
}
