//! Self-check suites run by `nlyoung verify`.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;

use nonlocal_young::asymptotics::{gaps_decrease, slope_check, DEFAULT_OFFSETS};
use nonlocal_young::kernel_integrals::{log_radial_remainder, radial_remainder};
use nonlocal_young::nonlocal_energy_2d::{
    cancellation_check, halfdisk_audit, s_to_zero_limit_check,
};
use nonlocal_young::quadrature::integrate;
use nonlocal_young::special_functions::{
    kappa1_at_zero, kappa2_at_zero, lemma_H, xi, XiDomain, XI_HALF_PI,
};
use nonlocal_young::{EvalPoint, PlanarScene, QuadratureSpec, Regime, RegionSpec, Shape};
use serde::Serialize;

use crate::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Lemma,
    Kappa,
    Halfdisk,
    Szero,
    Expansions,
}

/// Loosest tolerance the nested energy quadratures are run at.
pub const SZERO_MIN_TOL: f64 = 1e-6;

/// `s` grid of the `szero` suite.
pub const SZERO_S_GRID: [f64; 3] = [0.1, 0.03, 0.01];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub computed: f64,
    pub expected: f64,
    /// `|computed - expected|` for closeness checks, `computed - expected`
    /// for lower bounds.
    pub gap: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn close(name: impl Into<String>, computed: f64, expected: f64, tolerance: f64) -> Self {
        let gap = (computed - expected).abs();
        Self { name: name.into(), computed, expected, gap, tolerance, pass: gap <= tolerance }
    }

    /// Passes when `computed > bound`.
    pub fn above(name: impl Into<String>, computed: f64, bound: f64) -> Self {
        let gap = computed - bound;
        Self { name: name.into(), computed, expected: bound, gap, tolerance: 0.0, pass: gap > 0.0 }
    }

    /// Passes when `computed <= bound`.
    pub fn below(name: impl Into<String>, computed: f64, bound: f64) -> Self {
        let gap = bound - computed;
        Self { name: name.into(), computed, expected: bound, gap, tolerance: 0.0, pass: gap >= 0.0 }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        let v = if ok { 1.0 } else { 0.0 };
        Self { name: name.into(), computed: v, expected: 1.0, gap: 1.0 - v, tolerance: 0.0, pass: ok }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<44} {:>24.16e} {:>24.16e} {:>10.3e} {}",
            self.name,
            self.computed,
            self.expected,
            self.gap,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Options that only some suites use.
#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub regions: Option<RegionSpec>,
    pub sigma: Option<f64>,
}

pub fn run(suite: Suite, tol: f64, opts: &VerifyOptions) -> CliResult<Vec<Check>> {
    let spec = crate::spec_for(tol)?;
    match suite {
        Suite::Lemma => lemma(&spec),
        Suite::Kappa => kappa(&spec),
        Suite::Halfdisk => halfdisk(&spec),
        Suite::Szero => szero(tol, opts),
        Suite::Expansions => expansions(&spec),
    }
}

/// `∫_0^α ∫_0^∞ r log q q^(-3/2) dr dt` against the closed form `H(α)`.
fn lemma(spec: &QuadratureSpec) -> CliResult<Vec<Check>> {
    let inner = spec.nested();
    (1..=10)
        .map(|k| {
            let a = FRAC_PI_2 * k as f64 / 10.0;
            let q = integrate(|t| Ok(log_radial_remainder(t, 1.0, &inner)? + 2.0), 0.0, a, spec)?;
            Ok(Check::close(format!("H({a:.4})"), q.value, lemma_H(a)?, 1e-8))
        })
        .collect()
}

fn kappa(spec: &QuadratureSpec) -> CliResult<Vec<Check>> {
    let mut out = vec![Check::close(
        "xi(pi/2) = (pi/2) log 2",
        xi(XiDomain::new(FRAC_PI_2)?, spec)?,
        XI_HALF_PI,
        1e-10,
    )];
    for k in 1..=5 {
        let a = FRAC_PI_2 * k as f64 / 5.0;
        let k2 = kappa2_at_zero(a, spec)?;
        let x = xi(XiDomain::new(a)?, spec)?;
        out.push(Check::close(format!("kappa2({a:.4}, 0) = -2 xi"), k2, -2.0 * x, 1e-10));
        let twice = 2.0 * integrate(kappa1_at_zero, 0.0, a, spec)?.value;
        out.push(Check::close(format!("kappa2({a:.4}, 0) = 2 int kappa1"), k2, twice, 1e-9));
    }
    // Richardson extrapolation of κ1(t, s) to s = 0
    let h = 1e-3;
    for k in 1..=5 {
        let t = FRAC_PI_2 * k as f64 / 5.0;
        let extrapolated = 2.0 * radial_remainder(t, h, spec)? - radial_remainder(t, 2.0 * h, spec)?;
        out.push(Check::close(
            format!("kappa1({t:.4}, 0) vs small s"),
            kappa1_at_zero(t)?,
            extrapolated,
            1e-3,
        ));
    }
    Ok(out)
}

fn halfdisk(spec: &QuadratureSpec) -> CliResult<Vec<Check>> {
    let mut out = Vec::new();
    for rho in [0.5, 1.0, 2.0] {
        for s in [0.2, 0.5, 0.8] {
            let a = halfdisk_audit(rho, s, spec)?;
            let tol = spec.tolerance_for(a.f_q);
            out.push(Check::above(format!("F_Q - F_P (rho={rho}, s={s})"), a.margin(), 10.0 * tol));
            out.push(Check::close(
                format!("F_Q - F_P = cap + strip (rho={rho}, s={s})"),
                a.margin(),
                a.cap + a.strip,
                100.0 * tol,
            ));
        }
    }
    for point in [EvalPoint::P, EvalPoint::Q] {
        let scene = PlanarScene::new(1.0, 0.5, point)?;
        let c = cancellation_check(&scene, 0.05, spec)?;
        out.push(Check::close(
            format!("cancellation identity at {point:?}"),
            c.outside_droplet - c.droplet,
            c.domain - c.spill,
            100.0 * spec.tolerance_for(c.outside_droplet),
        ));
    }
    Ok(out)
}

pub fn default_regions() -> RegionSpec {
    RegionSpec {
        e: Shape::Disk { center: [0.0, 0.0], radius: 0.3 },
        omega: Shape::Disk { center: [0.0, 0.0], radius: 1.0 },
    }
}

fn szero(tol: f64, opts: &VerifyOptions) -> CliResult<Vec<Check>> {
    let spec = crate::spec_for(tol.max(SZERO_MIN_TOL))?;
    let regions = opts.regions.clone().unwrap_or_else(default_regions);
    let sigma = opts.sigma.unwrap_or(0.5);
    let rows = s_to_zero_limit_check(&regions, sigma, &SZERO_S_GRID, &spec)?;
    let scale = TAU * regions.e.area();
    let mut out = Vec::new();
    for r in &rows {
        out.push(Check::close(
            format!("s I(E, Omega^c) (s={})", r.s),
            r.exterior,
            scale,
            0.05 * scale,
        ));
    }
    let errors: Vec<f64> = rows.iter().map(|r| (r.exterior - scale).abs()).collect();
    out.push(Check::holds(
        "exterior error shrinks as s decreases",
        errors.windows(2).all(|w| w[1] < w[0]),
    ));
    let last = rows.last().expect("grid is not empty");
    out.push(Check::below(
        format!("s I(E, E^c cap Omega) (s={})", last.s),
        last.interior,
        0.05 * scale,
    ));
    out.push(Check::close(
        format!("scaled energy vs 2 pi sigma |E| (s={})", last.s),
        last.scaled_energy,
        last.target,
        0.05 * scale,
    ));
    Ok(out)
}

fn expansions(spec: &QuadratureSpec) -> CliResult<Vec<Check>> {
    let mut out = Vec::new();
    for regime in [Regime::AtOne, Regime::AtZero] {
        for sigma in [-0.8, -0.4, 0.4, 0.8] {
            let pts = slope_check(regime, sigma, &DEFAULT_OFFSETS, spec)?;
            let last = pts.last().expect("offsets are not empty");
            out.push(Check::close(
                format!("{regime:?} slope (sigma={sigma}, h={})", last.h),
                last.empirical_slope,
                last.analytic_slope,
                1e-2,
            ));
            out.push(Check::holds(
                format!("{regime:?} gaps decrease (sigma={sigma})"),
                gaps_decrease(&pts),
            ));
        }
    }
    Ok(out)
}

/// Prints the report; the header names the columns.
pub fn render(checks: &[Check]) -> String {
    let mut s = format!(
        "{:<44} {:>24} {:>24} {:>10} {}\n",
        "check", "computed", "expected", "gap", "result"
    );
    for c in checks {
        s.push_str(&c.to_string());
        s.push('\n');
    }
    s
}
