//! Invariants of the contact-angle pipeline, checked through the public API.

use std::f64::consts::{FRAC_PI_2, PI};

use nonlocal_young::angle_solver::{dtheta_dsigma, f_value, solve_theta};
use nonlocal_young::asymptotics::{expand, expand_at_one};
use nonlocal_young::kernel_integrals::{cone_integral, cone_integral_dalpha};
use nonlocal_young::special_functions::{kappa1_at_zero, kappa2_at_zero, xi, XiDomain};
use nonlocal_young::quadrature::integrate;
use nonlocal_young::{AngleQuery, ConeParams, QuadratureSpec, Regime};
use proptest::prelude::*;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn theta(s: f64, sigma: f64) -> f64 {
    solve_theta(AngleQuery::new(s, sigma).unwrap(), &spec()).unwrap().theta
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cone_integral_is_positive_and_increasing(
        s in 0.02f64..1.0,
        a in 0.01f64..3.0,
        da in 0.001f64..0.1,
    ) {
        let i = |a| cone_integral(ConeParams::new(a, s).unwrap(), &spec()).unwrap();
        let lo = i(a);
        prop_assert!(lo > 0.0);
        prop_assert!(i(a + da) > lo);
        prop_assert!(cone_integral_dalpha(ConeParams::new(a, s).unwrap(), &spec()).unwrap() > 0.0);
    }

    #[test]
    fn cone_integral_tends_to_twice_the_angle(s in 1e-4f64..0.05, a in 0.1f64..FRAC_PI_2) {
        let i = cone_integral(ConeParams::new(a, s).unwrap(), &spec()).unwrap();
        prop_assert!((s * i - 2.0 * a).abs() <= 3.0 * s);
    }

    #[test]
    fn young_law_holds_at_the_solution(s in 0.02f64..0.98, sigma in -0.95f64..0.95) {
        let t = theta(s, sigma);
        prop_assert!((f_value(s, t, &spec()).unwrap() - (1.0 + sigma)).abs() <= 1e-10);
    }

    #[test]
    fn theta_is_increasing_in_sigma(s in 0.02f64..0.98, sigma in -0.9f64..0.85, d in 1e-3f64..0.1) {
        prop_assert!(theta(s, sigma + d) > theta(s, sigma));
        prop_assert!(dtheta_dsigma(AngleQuery::new(s, sigma).unwrap(), &spec()).unwrap() > 0.0);
    }

    #[test]
    fn hydrophilic_angles_are_acute(s in 0.02f64..0.98, sigma in -0.99f64..-1e-3) {
        let t = theta(s, sigma);
        prop_assert!(t > 0.0 && t < FRAC_PI_2);
    }

    #[test]
    fn expansion_coefficients_are_antisymmetric(sigma in 0.001f64..0.99) {
        for regime in [Regime::AtOne, Regime::AtZero] {
            let a = expand(regime, sigma, &spec()).unwrap();
            let b = expand(regime, -sigma, &spec()).unwrap();
            prop_assert!((a.theta0 + b.theta0 - PI).abs() < 1e-14);
            prop_assert!((a.slope + b.slope).abs() < 1e-9);
        }
        prop_assert!(expand_at_one(sigma).unwrap().slope > 0.0);
    }

    #[test]
    fn xi_is_increasing_below_a_right_angle(a in 0.0f64..1.5, d in 1e-3f64..0.07) {
        let x = |a| xi(XiDomain::new(a).unwrap(), &spec()).unwrap();
        prop_assert!(x(a + d) > x(a));
    }

    #[test]
    fn kappa2_is_twice_the_integral_of_kappa1(a in 0.01f64..FRAC_PI_2) {
        let q = integrate(kappa1_at_zero, 0.0, a, &spec()).unwrap().value;
        prop_assert!((kappa2_at_zero(a, &spec()).unwrap() - 2.0 * q).abs() < 1e-9);
    }
}

#[test]
fn endpoint_sign_structure() {
    // close to s = 1 the angle sits on the far side of arccos(-σ)
    for s in [0.02, 0.98] {
        for sigma in [-0.8, -0.4, -0.1, 0.1, 0.4, 0.8] {
            let t = theta(s, sigma);
            let arc = f64::acos(-sigma);
            assert_eq!(t < arc, sigma < 0.0, "s={s} sigma={sigma}");
        }
    }
}

#[test]
fn angle_stays_away_from_zero_as_s_varies() {
    for sigma in [-0.95, -0.5] {
        let inf = [0.001, 0.01, 0.1, 0.5, 0.9, 0.99, 0.999]
            .into_iter()
            .map(|s| theta(s, sigma))
            .fold(f64::INFINITY, f64::min);
        assert!(inf > 0.05, "sigma={sigma}: {inf}");
    }
}
