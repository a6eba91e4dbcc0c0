//! Fixed inputs shared by the benchmarks.

use nonlocal_young::{AngleQuery, ConeParams, EvalPoint, PlanarScene, QuadratureSpec};

pub fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

/// Cone half-openings and fractional orders spanning the solver's range.
pub fn cones() -> Vec<(&'static str, ConeParams)> {
    [("narrow_small_s", 0.3, 0.05), ("right_mid_s", 1.5, 0.5), ("wide_large_s", 2.8, 0.95)]
        .into_iter()
        .map(|(name, a, s)| (name, ConeParams::new(a, s).expect("valid cone")))
        .collect()
}

pub fn angle_queries() -> Vec<(&'static str, AngleQuery)> {
    [("s0.05_sigma-0.8", 0.05, -0.8), ("s0.5_sigma0.3", 0.5, 0.3), ("s0.95_sigma0.9", 0.95, 0.9)]
        .into_iter()
        .map(|(name, s, g)| (name, AngleQuery::new(s, g).expect("valid query")))
        .collect()
}

pub fn scenes() -> Vec<(&'static str, PlanarScene)> {
    [("P_s0.2", 0.2, EvalPoint::P), ("Q_s0.5", 0.5, EvalPoint::Q), ("P_s0.8", 0.8, EvalPoint::P)]
        .into_iter()
        .map(|(name, s, p)| (name, PlanarScene::new(1.0, s, p).expect("valid scene")))
        .collect()
}
