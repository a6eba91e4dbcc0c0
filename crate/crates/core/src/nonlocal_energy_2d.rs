//! Planar nonlocal energies for the kernel `|x - y|^(-2-s)`.
//!
//! Every quantity here is built from the kernel integral about a point,
//!
//! ```text
//! K(x, A) = ∫_A |x - y|^(-2-s) dy = ∫_0^{2pi} Σ_{[a,b] ⊂ ray ∩ A} (a^(-s) - b^(-s)) / s dφ
//! ```
//!
//! whose radial part is exact, so unbounded regions need no truncation. The
//! angular integral is split at the critical directions of the region and
//! graded toward each split, where cusps of the region touching `x` make the
//! integrand blow up like `|φ - φ0|^(-s)`.
//!
//! Two applications are provided:
//! * the half-disk functional `F(x) = K(x, H \ (B ∪ R))` for a half-disk `B`
//!   in the half-plane `H` and its reflection `R` across the tangent at `x`;
//! * interaction energies `I_s(A, B) = ∫_A K(x, B) dx` and their `s -> 0`
//!   behaviour.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::geometry::{CriticalDirection, Direction, Point, Region};
use crate::quadrature::{integrate_segments, Grading, QuadratureSpec, Segment, SegmentPoint};

/// Relative distance below which a point counts as lying on a circle or line.
pub const SNAP: f64 = 1e-12;

/// Critical directions closer than this (radians) are merged.
const MERGE: f64 = 1e-13;

/// `lim_{s->0} s ∫_{|y|>1} |y|^(-2-s) dy`, the length of the unit circle.
pub const C_BAR_2: f64 = TAU;

/// Number of independent random streams used by [`monte_carlo_excised`].
pub const MONTE_CARLO_STREAMS: u64 = 64;

fn check_s(s: f64) -> Result<()> {
    check_range("s", s, s > 0.0 && s < 1.0, "0 < s < 1")
}

/// Endpoint grading power that makes `|φ - φ0|^(-s)` smooth after the map.
fn grading_power(s: f64) -> f64 {
    (2.0 / (1.0 - s)).ceil().max(2.0)
}

/// `∫_a^b r^(-1-s) dr = (a^(-s) - b^(-s)) / s`.
fn radial_kernel(a: f64, b: f64, s: f64) -> f64 {
    let head = (-s * a.ln()).exp() / s;
    if b == f64::INFINITY {
        head
    } else {
        head * -(-s * (b / a).ln()).exp_m1()
    }
}

/// Angular segments between consecutive critical directions, with the
/// reference vectors of both ends.
fn angular_segments(dirs: &[CriticalDirection]) -> (Vec<Segment>, Vec<(Point, Point)>) {
    if dirs.is_empty() {
        let e = Point::new(1.0, 0.0);
        return (
            vec![Segment { a: 0.0, b: TAU, grading: Grading::Both }],
            vec![(e, e)],
        );
    }
    let n = dirs.len();
    let mut segs = Vec::with_capacity(n);
    let mut bases = Vec::with_capacity(n);
    for i in 0..n {
        let a = dirs[i];
        let b = dirs[(i + 1) % n];
        let end = if i + 1 == n { b.angle + TAU } else { b.angle };
        segs.push(Segment { a: a.angle, b: end, grading: Grading::Both });
        bases.push((a.base, b.base));
    }
    (segs, bases)
}

/// Ray direction at a node, measured from whichever end of its segment is closer.
fn node_direction(pt: &SegmentPoint, bases: &[(Point, Point)]) -> Direction {
    let (base_a, base_b) = bases[pt.index];
    if pt.from_a <= pt.from_b {
        Direction::rotated(base_a, pt.from_a)
    } else {
        Direction::rotated(base_b, -pt.from_b)
    }
}

/// `∫_{region, |y - x| > excision} |x - y|^(-2-s) dy`.
///
/// Fails with [`Error::NonIntegrable`] when a positive-measure set of rays
/// starts inside the region, i.e. the integral diverges at `x`.
pub fn kernel_integral_about(
    x: Point,
    region: &Region,
    s: f64,
    excision: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_s(s)?;
    check_range("excision", excision, excision >= 0.0, "excision >= 0")?;
    if !x.is_finite() {
        return Err(Error::InvalidArgument("evaluation point must be finite".into()));
    }
    let dirs = region.critical_directions(x, SNAP, MERGE);
    let (segments, bases) = angular_segments(&dirs);
    let est = integrate_segments(
        |pt| {
            let dir = node_direction(&pt, &bases);
            let mut iv = region.ray_intervals(x, &dir, SNAP);
            if excision > 0.0 {
                iv = iv.beyond(excision);
            }
            let mut acc = 0.0;
            for &(a, b) in iv.as_slice() {
                if a == 0.0 {
                    return Err(Error::NonIntegrable(format!(
                        "region contains a neighbourhood of ({}, {}) along direction {:?}",
                        x.x,
                        x.y,
                        dir.vector()
                    )));
                }
                acc += radial_kernel(a, b, s);
            }
            Ok(acc)
        },
        &segments,
        grading_power(s),
        spec,
    )?;
    Ok(est.value)
}

/// Where on the upper half of `∂B_rho(0)` the functional is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalPoint {
    /// `(-rho, 0)`, the corner of the half-disk.
    P,
    /// `(0, rho)`, the top of the half-disk.
    Q,
    /// `rho (cos ω, sin ω)` with `ω ∈ [0, pi]`.
    Angle(f64),
}

/// Half-plane `H = {y2 > 0}`, half-disk `B = H ∩ B_rho(0)` and an evaluation
/// point on `H ∩ ∂B_rho(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarScene {
    rho: f64,
    s: f64,
    point: EvalPoint,
}

impl PlanarScene {
    pub fn new(rho: f64, s: f64, point: EvalPoint) -> Result<Self> {
        check_range("rho", rho, rho > 0.0, "rho > 0")?;
        check_s(s)?;
        if let EvalPoint::Angle(w) = point {
            check_range("omega", w, (0.0..=PI).contains(&w), "0 <= omega <= pi")?;
        }
        Ok(Self { rho, s, point })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn eval_point(&self) -> EvalPoint {
        self.point
    }

    /// Outward unit normal of `∂B_rho(0)` at the evaluation point.
    fn normal(&self) -> Point {
        match self.point {
            EvalPoint::P => Point::new(-1.0, 0.0),
            EvalPoint::Q => Point::new(0.0, 1.0),
            EvalPoint::Angle(w) => Point::new(w.cos(), w.sin()),
        }
    }

    /// The evaluation point `x`.
    pub fn point(&self) -> Point {
        self.rho * self.normal()
    }

    /// `H = {y2 > 0}`.
    pub fn container(&self) -> Region {
        Region::HalfPlane { normal: Point::new(0.0, 1.0), offset: 0.0 }
    }

    /// `B = H ∩ B_rho(0)`.
    pub fn droplet(&self) -> Region {
        Region::Disk { center: Point::default(), radius: self.rho }.and(self.container())
    }

    /// Reflection of `B` across the tangent line `{ν · y = rho}` at `x`.
    pub fn reflected(&self) -> Region {
        let nu = self.normal();
        let n = Point::new(0.0, 1.0);
        let k = n.dot(nu);
        // y ∈ R  iff  its mirror image lies in H
        let half = Region::HalfPlane {
            normal: n - (2.0 * k) * nu,
            offset: -2.0 * self.rho * k,
        };
        Region::Disk { center: 2.0 * self.point(), radius: self.rho }.and(half)
    }

    /// `D = H \ (B ∪ R)`.
    pub fn domain(&self) -> Region {
        self.container()
            .minus(Region::Union(vec![self.droplet(), self.reflected()]))
    }
}

/// `F(x) = ∫_{H \ (B ∪ R)} |x - y|^(-2-s) dy`.
#[allow(non_snake_case)]
pub fn halfdisk_F(scene: &PlanarScene, spec: &QuadratureSpec) -> Result<f64> {
    kernel_integral_about(scene.point(), &scene.domain(), scene.s, 0.0, spec)
}

/// Decomposition of `F(Q) - F(P)` into the regions gained at `Q`.
///
/// Rotating the picture at `P` onto `Q` and folding it across the vertical
/// axis shows `F(P) = K(Q, {y2 > rho} \ B_rho((0, 2rho)))`. The domain at `Q`
/// adds the cap `B_rho((0, 2rho)) ∩ {y2 > 2rho}` and the strip
/// `{0 < y2 < rho} \ B_rho(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfDiskAudit {
    pub rho: f64,
    pub s: f64,
    pub f_p: f64,
    pub f_q: f64,
    /// `F(P)` recomputed on its isometric copy about `Q`.
    pub f_p_copy: f64,
    pub cap: f64,
    pub strip: f64,
}

impl HalfDiskAudit {
    /// `F(Q) - F(P)`.
    pub fn margin(&self) -> f64 {
        self.f_q - self.f_p
    }

    /// `|F(Q) - F(P) - cap - strip|`.
    pub fn decomposition_gap(&self) -> f64 {
        (self.f_q - self.f_p - self.cap - self.strip).abs()
    }

    /// `|F(P) - F(P) on the copy|`.
    pub fn copy_gap(&self) -> f64 {
        (self.f_p - self.f_p_copy).abs()
    }
}

pub fn halfdisk_audit(rho: f64, s: f64, spec: &QuadratureSpec) -> Result<HalfDiskAudit> {
    let at_p = PlanarScene::new(rho, s, EvalPoint::P)?;
    let at_q = PlanarScene::new(rho, s, EvalPoint::Q)?;
    let q = at_q.point();
    let upper = Region::HalfPlane { normal: Point::new(0.0, 1.0), offset: rho };
    let top_disk = Region::Disk { center: Point::new(0.0, 2.0 * rho), radius: rho };
    let copy = upper.minus(top_disk.clone());
    let cap = top_disk.and(Region::HalfPlane { normal: Point::new(0.0, 1.0), offset: 2.0 * rho });
    let strip = at_q
        .container()
        .and(Region::HalfPlane { normal: Point::new(0.0, -1.0), offset: -rho })
        .minus(Region::Disk { center: Point::default(), radius: rho });

    let jobs: Vec<Box<dyn Fn() -> Result<f64> + Sync>> = vec![
        Box::new(|| halfdisk_F(&at_p, spec)),
        Box::new(|| halfdisk_F(&at_q, spec)),
        Box::new(|| kernel_integral_about(q, &copy, s, 0.0, spec)),
        Box::new(|| kernel_integral_about(q, &cap, s, 0.0, spec)),
        Box::new(|| kernel_integral_about(q, &strip, s, 0.0, spec)),
    ];
    let v: Vec<f64> = jobs.par_iter().map(|f| f()).collect::<Result<_>>()?;
    Ok(HalfDiskAudit {
        rho,
        s,
        f_p: v[0],
        f_q: v[1],
        f_p_copy: v[2],
        cap: v[3],
        strip: v[4],
    })
}

/// The cancellation between `B` and its mirror image `R`, with a ball of
/// radius `excision` about `x` removed from every region:
///
/// ```text
/// K(x, H \ B) - K(x, B) = K(x, D) - K(x, R \ H)
/// ```
///
/// The last term vanishes whenever `R ⊂ H`, as at `P` and `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CancellationCheck {
    pub outside_droplet: f64,
    pub droplet: f64,
    pub domain: f64,
    pub spill: f64,
}

impl CancellationCheck {
    pub fn gap(&self) -> f64 {
        (self.outside_droplet - self.droplet - self.domain + self.spill).abs()
    }
}

pub fn cancellation_check(
    scene: &PlanarScene,
    excision: f64,
    spec: &QuadratureSpec,
) -> Result<CancellationCheck> {
    check_range("excision", excision, excision > 0.0, "excision > 0")?;
    let x = scene.point();
    let s = scene.s;
    let regions = [
        scene.container().minus(scene.droplet()),
        scene.droplet(),
        scene.domain(),
        scene.reflected().minus(scene.container()),
    ];
    let v: Vec<f64> = regions
        .par_iter()
        .map(|r| kernel_integral_about(x, r, s, excision, spec))
        .collect::<Result<_>>()?;
    Ok(CancellationCheck {
        outside_droplet: v[0],
        droplet: v[1],
        domain: v[2],
        spill: v[3],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Monte Carlo estimate of `∫_{region, |y - x| > excision} |x - y|^(-2-s) dy`.
///
/// Directions are uniform and radii follow the density `s ε^s r^(-1-s)` on
/// `[ε, ∞)`, so the estimator is `2pi ε^(-s)/s` times the hit fraction.
/// Samples are split over [`MONTE_CARLO_STREAMS`] ChaCha streams of one seed;
/// the result does not depend on the number of worker threads.
pub fn monte_carlo_excised(
    x: Point,
    region: &Region,
    s: f64,
    excision: f64,
    samples: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    check_s(s)?;
    check_range("excision", excision, excision > 0.0, "excision > 0")?;
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let per = samples / MONTE_CARLO_STREAMS;
    let extra = samples % MONTE_CARLO_STREAMS;
    let hits: u64 = (0..MONTE_CARLO_STREAMS)
        .into_par_iter()
        .map(|k| {
            let n = per + u64::from(k < extra);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let mut count = 0u64;
            for _ in 0..n {
                let phi = TAU * rng.gen::<f64>();
                let u: f64 = rng.gen();
                let r = excision * (1.0 - u).powf(-1.0 / s);
                let (sin, cos) = phi.sin_cos();
                if region.contains(x + r * Point::new(cos, sin)) {
                    count += 1;
                }
            }
            count
        })
        .sum();
    let scale = TAU * excision.powf(-s) / s;
    let p = hits as f64 / samples as f64;
    Ok(MonteCarloEstimate {
        value: scale * p,
        std_error: scale * (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
        seed,
    })
}

/// A bounded planar set given as JSON, e.g.
/// `{"type":"disk","center":[0,0],"radius":1}` or
/// `{"type":"polygon","vertices":[[0,0],[1,0],[0,1]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Shape {
    Disk { center: [f64; 2], radius: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
}

impl Shape {
    pub fn to_region(&self) -> Result<Region> {
        match self {
            Shape::Disk { center, radius } => {
                Region::disk(Point::new(center[0], center[1]), *radius)
            }
            Shape::Polygon { vertices } => {
                Region::polygon(vertices.iter().map(|v| Point::new(v[0], v[1])).collect())
            }
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Shape::Disk { radius, .. } => PI * radius * radius,
            Shape::Polygon { vertices } => crate::geometry::signed_area(
                &vertices.iter().map(|v| Point::new(v[0], v[1])).collect::<Vec<_>>(),
            ),
        }
    }

    /// Points on the boundary, used for containment checks.
    fn boundary_samples(&self) -> Vec<Point> {
        match self {
            Shape::Disk { center, radius } => (0..256)
                .map(|k| {
                    let t = TAU * k as f64 / 256.0;
                    Point::new(center[0] + radius * t.cos(), center[1] + radius * t.sin())
                })
                .collect(),
            Shape::Polygon { vertices } => {
                let n = vertices.len();
                let mut pts = Vec::new();
                for i in 0..n {
                    let (p, q) = (vertices[i], vertices[(i + 1) % n]);
                    for k in 0..16 {
                        let t = k as f64 / 16.0;
                        pts.push(Point::new(p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])));
                    }
                }
                pts
            }
        }
    }
}

/// A wetted set `E` inside a container `Ω`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    #[serde(rename = "E", alias = "e")]
    pub e: Shape,
    #[serde(rename = "Omega", alias = "omega")]
    pub omega: Shape,
}

impl RegionSpec {
    /// Checks that both shapes are valid and that `∂E` lies inside `Ω`.
    pub fn new(e: Shape, omega: Shape) -> Result<Self> {
        let spec = Self { e, omega };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.e.to_region()?;
        let omega = self.omega.to_region()?;
        if self.e.boundary_samples().iter().any(|p| !omega.contains(*p)) {
            return Err(Error::InvalidRegion("E is not strictly inside Omega".into()));
        }
        Ok(())
    }
}

/// Rejects pairs that share a set of positive area, by testing a grid of
/// points over the bounded one.
fn check_disjoint(a: &Region, b: &Region) -> Result<()> {
    let (lo, hi) = a.bounding_box().expect("caller passes a bounded region");
    const N: usize = 97;
    for i in 0..N {
        for j in 0..N {
            let p = Point::new(
                lo.x + (hi.x - lo.x) * (i as f64 + 0.5) / N as f64,
                lo.y + (hi.y - lo.y) * (j as f64 + 0.5) / N as f64,
            );
            if a.contains(p) && b.contains(p) {
                return Err(Error::NotDisjoint);
            }
        }
    }
    Ok(())
}

/// `I_s(A, B) = ∫_A ∫_B |x - y|^(-2-s) dy dx` for disjoint `A`, `B`, at least
/// one of them bounded.
///
/// The outer integral runs in polar coordinates about the centre of the
/// bounding box of the bounded set, graded toward every boundary crossing
/// where the inner integral grows like `dist^(-s)`.
pub fn interaction_energy(a: &Region, b: &Region, s: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_s(s)?;
    spec.validate()?;
    let (a, b) = match (a.is_bounded(), b.is_bounded()) {
        (true, _) => (a, b),
        (false, true) => (b, a),
        (false, false) => {
            return Err(Error::InvalidArgument(
                "at least one of the two sets must be bounded".into(),
            ))
        }
    };
    check_disjoint(a, b)?;
    let (lo, hi) = a.bounding_box().expect("checked above");
    let c = 0.5 * (lo + hi);
    let dirs = a.critical_directions(c, SNAP, MERGE);
    let (segments, bases) = angular_segments(&dirs);
    let radial_spec = spec.nested();
    let inner_spec = radial_spec.nested();
    let power = grading_power(s);

    let est = integrate_segments(
        |pt| {
            let dir = node_direction(&pt, &bases);
            let u = dir.vector();
            let mut acc = 0.0;
            for &(r0, r1) in a.ray_intervals(c, &dir, 0.0).as_slice() {
                if !r1.is_finite() {
                    return Err(Error::InvalidRegion("bounded set produced an unbounded ray".into()));
                }
                let seg = [Segment { a: r0, b: r1, grading: Grading::Both }];
                let radial = integrate_segments(
                    |q| {
                        let x = c + q.x * u;
                        match kernel_integral_about(x, b, s, 0.0, &inner_spec) {
                            Ok(v) => Ok(v * q.x),
                            // a node that rounds onto the shared boundary
                            Err(Error::NonIntegrable(_))
                                if q.from_a.min(q.from_b) < 1e-9 * (r1 - r0) =>
                            {
                                Ok(0.0)
                            }
                            Err(e) => Err(e),
                        }
                    },
                    &seg,
                    power,
                    &radial_spec,
                )?;
                acc += radial.value;
            }
            Ok(acc)
        },
        &segments,
        2.0,
        spec,
    )?;
    Ok(est.value)
}

/// One row of [`s_to_zero_limit_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledEnergy {
    pub s: f64,
    /// `s I_s(E, E^c ∩ Ω)`, which vanishes as `s -> 0`.
    pub interior: f64,
    /// `s I_s(E, Ω^c)`, which tends to `2pi |E|`.
    pub exterior: f64,
    /// `interior + σ exterior`.
    pub scaled_energy: f64,
    /// `2pi σ |E|`.
    pub target: f64,
}

/// Scaled energies `s [I_s(E, E^c ∩ Ω) + σ I_s(E, Ω^c)]` along a descending
/// grid of small `s`, next to their common limit `2pi σ |E|`.
pub fn s_to_zero_limit_check(
    regions: &RegionSpec,
    sigma: f64,
    s_grid: &[f64],
    spec: &QuadratureSpec,
) -> Result<Vec<ScaledEnergy>> {
    check_range("sigma", sigma, sigma.abs() < 1.0, "|sigma| < 1")?;
    regions.validate()?;
    if s_grid.is_empty() {
        return Err(Error::InvalidArgument("empty s grid".into()));
    }
    for &s in s_grid {
        check_range("s", s, s > 0.0 && s <= 0.2, "0 < s <= 0.2")?;
    }
    if s_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("s grid must be strictly descending".into()));
    }
    let e = regions.e.to_region()?;
    let omega = regions.omega.to_region()?;
    let inside = omega.clone().minus(e.clone());
    let outside = omega.complement();
    let target = C_BAR_2 * sigma * regions.e.area();
    s_grid
        .par_iter()
        .map(|&s| {
            let interior = s * interaction_energy(&e, &inside, s, spec)?;
            let exterior = s * interaction_energy(&e, &outside, s, spec)?;
            Ok(ScaledEnergy {
                s,
                interior,
                exterior,
                scaled_energy: interior + sigma * exterior,
                target,
            })
        })
        .collect()
}

/// Polar angle of the evaluation point, for reporting.
pub fn eval_point_angle(p: EvalPoint) -> f64 {
    match p {
        EvalPoint::P => PI,
        EvalPoint::Q => FRAC_PI_2,
        EvalPoint::Angle(w) => w,
    }
}
