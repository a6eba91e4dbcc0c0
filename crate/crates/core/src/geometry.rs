//! Planar regions built from disks, half-planes and polygons, and their
//! intersections with rays.
//!
//! Kernel integrals about a point `x` are evaluated in polar coordinates, so
//! the one geometric primitive everything needs is "which parameters `r >= 0`
//! put `x + r u` inside the region". Rays are described by a [`Direction`]
//! that stores a reference vector and a small rotation offset separately.
//! Dot products are formed against the reference vector first, so a ray
//! within `1e-200` rad of a tangent still sees the correct, tiny chord.

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    /// Rotation by +90 degrees.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl Mul<Point> for f64 {
    type Output = Point;
    fn mul(self, p: Point) -> Point {
        Point::new(self * p.x, self * p.y)
    }
}

/// Unit direction `base/|base|` rotated by an angle `delta`, with
/// `cos delta` and `sin delta` kept apart from the base vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    base: Point,
    norm: f64,
    cos: f64,
    sin: f64,
}

impl Direction {
    /// `base` rotated counter-clockwise by `delta`.
    pub fn rotated(base: Point, delta: f64) -> Self {
        let (sin, cos) = delta.sin_cos();
        Self {
            base,
            norm: base.norm(),
            cos,
            sin,
        }
    }

    pub fn from_angle(phi: f64) -> Self {
        Self::rotated(Point::new(1.0, 0.0), phi)
    }

    /// `u · w`, formed as `cos(delta) (base · w) + sin(delta) (perp(base) · w)`.
    pub fn dot(&self, w: Point) -> f64 {
        (self.cos * self.base.dot(w) + self.sin * self.base.perp().dot(w)) / self.norm
    }

    pub fn vector(&self) -> Point {
        (1.0 / self.norm) * (self.cos * self.base + self.sin * self.base.perp())
    }
}

/// Finite union of disjoint intervals of `[0, ∞)`, sorted, each of positive
/// length. The right end may be `f64::INFINITY`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Intervals(Vec<(f64, f64)>);

impl Intervals {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn all() -> Self {
        Self(vec![(0.0, f64::INFINITY)])
    }

    /// `[a, b] ∩ [0, ∞)`, or empty.
    pub fn single(a: f64, b: f64) -> Self {
        let a = a.max(0.0);
        if b > a {
            Self(vec![(a, b)])
        } else {
            Self::empty()
        }
    }

    pub fn as_slice(&self) -> &[(f64, f64)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + 1);
        let mut start = 0.0;
        for &(a, b) in &self.0 {
            if a > start {
                out.push((start, a));
            }
            start = b;
        }
        if start < f64::INFINITY {
            out.push((start, f64::INFINITY));
        }
        Self(out)
    }

    pub fn intersect(&self, o: &Self) -> Self {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.0.len() && j < o.0.len() {
            let (a1, b1) = self.0[i];
            let (a2, b2) = o.0[j];
            let (a, b) = (a1.max(a2), b1.min(b2));
            if b > a {
                out.push((a, b));
            }
            if b1 < b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self(out)
    }

    pub fn union(&self, o: &Self) -> Self {
        let mut all: Vec<(f64, f64)> = self.0.iter().chain(o.0.iter()).copied().collect();
        all.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(all.len());
        for (a, b) in all {
            match out.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        Self(out)
    }

    /// Removes `[0, r)`.
    pub fn beyond(&self, r: f64) -> Self {
        self.intersect(&Self(vec![(r, f64::INFINITY)]))
    }
}

/// A planar region; membership is decided up to sets of measure zero.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Disk { center: Point, radius: f64 },
    /// `{ y : normal · y > offset }`
    HalfPlane { normal: Point, offset: f64 },
    /// Simple polygon with counter-clockwise vertices.
    Polygon { vertices: Vec<Point> },
    Complement(Box<Region>),
    Intersection(Vec<Region>),
    Union(Vec<Region>),
}

/// A direction from the ray origin at which the interval structure of a ray
/// can change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalDirection {
    pub angle: f64,
    pub base: Point,
    /// Exact tangents from a point on a circle; preferred when merging.
    pub exact: bool,
}

impl CriticalDirection {
    fn new(base: Point, exact: bool) -> Option<Self> {
        if base.norm_sq() > 0.0 && base.is_finite() {
            Some(Self {
                angle: base.angle().rem_euclid(TAU),
                base,
                exact,
            })
        } else {
            None
        }
    }
}

enum Boundary {
    Circle(Point, f64),
    Line(Point, f64),
    Edge(Point, Point),
}

impl Region {
    pub fn disk(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite() && center.is_finite()) {
            return Err(Error::InvalidRegion(format!("disk radius {radius}")));
        }
        Ok(Region::Disk { center, radius })
    }

    /// `{ y : normal · y > offset }`; the normal is normalised.
    pub fn half_plane(normal: Point, offset: f64) -> Result<Self> {
        let n = normal.norm();
        if !(n > 0.0 && n.is_finite() && offset.is_finite()) {
            return Err(Error::InvalidRegion("degenerate half-plane".into()));
        }
        Ok(Region::HalfPlane {
            normal: (1.0 / n) * normal,
            offset: offset / n,
        })
    }

    /// Simple polygon; vertices must be counter-clockwise.
    pub fn polygon(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidRegion("polygon needs at least 3 vertices".into()));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidRegion("non-finite polygon vertex".into()));
        }
        if signed_area(&vertices) <= 0.0 {
            return Err(Error::InvalidRegion(
                "polygon vertices must be counter-clockwise".into(),
            ));
        }
        let n = vertices.len();
        for i in 0..n {
            for j in i + 1..n {
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                let (p, q) = (vertices[i], vertices[(i + 1) % n]);
                let (a, b) = (vertices[j], vertices[(j + 1) % n]);
                if segments_cross(p, q, a, b) {
                    return Err(Error::InvalidRegion("polygon is not simple".into()));
                }
            }
        }
        Ok(Region::Polygon { vertices })
    }

    pub fn complement(self) -> Self {
        Region::Complement(Box::new(self))
    }

    pub fn and(self, other: Region) -> Self {
        Region::Intersection(vec![self, other])
    }

    pub fn minus(self, other: Region) -> Self {
        Region::Intersection(vec![self, other.complement()])
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            Region::Disk { center, radius } => (p - *center).norm_sq() < radius * radius,
            Region::HalfPlane { normal, offset } => normal.dot(p) > *offset,
            Region::Polygon { vertices } => polygon_contains(vertices, p),
            Region::Complement(r) => !r.contains(p),
            Region::Intersection(rs) => rs.iter().all(|r| r.contains(p)),
            Region::Union(rs) => rs.iter().any(|r| r.contains(p)),
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.bounding_box().is_some()
    }

    /// Axis-aligned bounding box `(min, max)` when the region is bounded.
    pub fn bounding_box(&self) -> Option<(Point, Point)> {
        match self {
            Region::Disk { center, radius } => Some((
                Point::new(center.x - radius, center.y - radius),
                Point::new(center.x + radius, center.y + radius),
            )),
            Region::Polygon { vertices } => {
                let mut lo = vertices[0];
                let mut hi = vertices[0];
                for v in vertices {
                    lo = Point::new(lo.x.min(v.x), lo.y.min(v.y));
                    hi = Point::new(hi.x.max(v.x), hi.y.max(v.y));
                }
                Some((lo, hi))
            }
            Region::HalfPlane { .. } | Region::Complement(_) => None,
            Region::Intersection(rs) => {
                let boxes: Vec<_> = rs.iter().filter_map(|r| r.bounding_box()).collect();
                let first = *boxes.first()?;
                Some(boxes.iter().fold(first, |(lo, hi), (l, h)| {
                    (
                        Point::new(lo.x.max(l.x), lo.y.max(l.y)),
                        Point::new(hi.x.min(h.x), hi.y.min(h.y)),
                    )
                }))
            }
            Region::Union(rs) => {
                let mut boxes = rs.iter().map(|r| r.bounding_box());
                let first = boxes.next()??;
                boxes.try_fold(first, |(lo, hi), b| {
                    let (l, h) = b?;
                    Some((
                        Point::new(lo.x.min(l.x), lo.y.min(l.y)),
                        Point::new(hi.x.max(h.x), hi.y.max(h.y)),
                    ))
                })
            }
        }
    }

    /// Parameters `r >= 0` with `origin + r u` inside the region.
    ///
    /// Quantities that decide whether the origin lies on a circle or line are
    /// set to zero when smaller than `snap` relative to the scale of the
    /// primitive, so that an origin placed on a boundary by construction is
    /// treated as exactly on it.
    pub fn ray_intervals(&self, origin: Point, dir: &Direction, snap: f64) -> Intervals {
        match self {
            Region::Disk { center, radius } => {
                let w = origin - *center;
                let b = dir.dot(w);
                let mut c = (w.norm_sq() - radius * radius) / (radius * radius);
                if c.abs() <= snap {
                    c = 0.0;
                }
                if c == 0.0 {
                    // roots 0 and -2b; squaring b would underflow near tangency
                    return if b < 0.0 {
                        Intervals::single(0.0, -2.0 * b)
                    } else {
                        Intervals::empty()
                    };
                }
                let c = c * radius * radius;
                let disc = b * b - c;
                if disc <= 0.0 {
                    return Intervals::empty();
                }
                let sq = disc.sqrt();
                // stable roots of r² + 2br + c
                let q = -b - b.signum() * sq;
                let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q, c / q) };
                Intervals::single(r1.min(r2), r1.max(r2))
            }
            Region::HalfPlane { normal, offset } => {
                let mut a = normal.dot(origin) - offset;
                if a.abs() <= snap * (offset.abs() + normal.dot(origin).abs()).max(1.0) {
                    a = 0.0;
                }
                let k = dir.dot(*normal);
                if k == 0.0 {
                    if a > 0.0 {
                        Intervals::all()
                    } else {
                        Intervals::empty()
                    }
                } else if k > 0.0 {
                    Intervals::single(-a / k, f64::INFINITY)
                } else {
                    Intervals::single(0.0, -a / k)
                }
            }
            Region::Polygon { vertices } => polygon_ray(vertices, origin, dir),
            Region::Complement(r) => r.ray_intervals(origin, dir, snap).complement(),
            Region::Intersection(rs) => {
                let mut acc = Intervals::all();
                for r in rs {
                    if acc.is_empty() {
                        break;
                    }
                    acc = acc.intersect(&r.ray_intervals(origin, dir, snap));
                }
                acc
            }
            Region::Union(rs) => rs.iter().fold(Intervals::empty(), |acc, r| {
                acc.union(&r.ray_intervals(origin, dir, snap))
            }),
        }
    }

    fn boundaries(&self, out: &mut Vec<Boundary>) {
        match self {
            Region::Disk { center, radius } => out.push(Boundary::Circle(*center, *radius)),
            Region::HalfPlane { normal, offset } => out.push(Boundary::Line(*normal, *offset)),
            Region::Polygon { vertices } => {
                let n = vertices.len();
                for i in 0..n {
                    out.push(Boundary::Edge(vertices[i], vertices[(i + 1) % n]));
                }
            }
            Region::Complement(r) => r.boundaries(out),
            Region::Intersection(rs) | Region::Union(rs) => {
                rs.iter().for_each(|r| r.boundaries(out))
            }
        }
    }

    /// Sorted directions from `origin` at which ray intervals may change
    /// combinatorially: tangents to circles, lines seen edge-on, polygon
    /// vertices and crossings of two boundary curves. Directions closer than
    /// `merge` radians are merged.
    pub fn critical_directions(&self, origin: Point, snap: f64, merge: f64) -> Vec<CriticalDirection> {
        let mut bounds = Vec::new();
        self.boundaries(&mut bounds);
        let mut dirs = Vec::new();
        let mut push = |base: Point, exact: bool| {
            if let Some(d) = CriticalDirection::new(base, exact) {
                dirs.push(d);
            }
        };
        for b in &bounds {
            match *b {
                Boundary::Circle(c, r) => {
                    let w = c - origin;
                    let rel = (w.norm_sq() - r * r) / (r * r);
                    if rel.abs() <= snap {
                        push(w.perp(), true);
                        push(-w.perp(), true);
                    } else if rel > 0.0 {
                        let beta = (r / w.norm()).asin();
                        let (sb, cb) = beta.sin_cos();
                        push(cb * w + sb * w.perp(), false);
                        push(cb * w - sb * w.perp(), false);
                    }
                }
                Boundary::Line(n, _) => {
                    push(n.perp(), true);
                    push(-n.perp(), true);
                }
                Boundary::Edge(p, _) => push(p - origin, false),
            }
        }
        for i in 0..bounds.len() {
            for j in i + 1..bounds.len() {
                for p in boundary_crossings(&bounds[i], &bounds[j]) {
                    // crossings at the origin itself carry no direction
                    let v = p - origin;
                    if v.norm() > 1e-12 * (1.0 + origin.norm()) {
                        push(v, false);
                    }
                }
            }
        }
        merge_directions(dirs, merge)
    }
}

fn merge_directions(mut dirs: Vec<CriticalDirection>, merge: f64) -> Vec<CriticalDirection> {
    dirs.sort_by(|a, b| a.angle.total_cmp(&b.angle));
    let mut out: Vec<CriticalDirection> = Vec::with_capacity(dirs.len());
    for d in dirs {
        match out.last_mut() {
            Some(last) if d.angle - last.angle <= merge => {
                if d.exact && !last.exact {
                    *last = d;
                }
            }
            _ => out.push(d),
        }
    }
    // wrap-around between the last and first direction
    if out.len() > 1 {
        let (first, last) = (out[0], out[out.len() - 1]);
        if first.angle + TAU - last.angle <= merge {
            if last.exact && !first.exact {
                out[0] = last;
            }
            out.pop();
        }
    }
    out
}

fn line_points(n: Point, d: f64) -> (Point, Point) {
    let p = d * n;
    (p, p + n.perp())
}

fn circle_line(c: Point, r: f64, p: Point, q: Point) -> Vec<(Point, f64)> {
    // points p + t (q - p) on the circle, with their parameter t
    let e = q - p;
    let w = p - c;
    let a = e.norm_sq();
    let b = w.dot(e) / a;
    let cc = (w.norm_sq() - r * r) / a;
    let disc = b * b - cc;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    [-b - sq, -b + sq].iter().map(|&t| (p + t * e, t)).collect()
}

fn boundary_crossings(a: &Boundary, b: &Boundary) -> Vec<Point> {
    use Boundary::*;
    match (a, b) {
        (Circle(c1, r1), Circle(c2, r2)) => {
            let d = *c2 - *c1;
            let dist = d.norm();
            if dist == 0.0 || dist > r1 + r2 || dist < (r1 - r2).abs() {
                return Vec::new();
            }
            let along = (r1 * r1 - r2 * r2 + dist * dist) / (2.0 * dist);
            let h = (r1 * r1 - along * along).max(0.0).sqrt();
            let u = (1.0 / dist) * d;
            let m = *c1 + along * u;
            vec![m + h * u.perp(), m - h * u.perp()]
        }
        (Circle(c, r), Line(n, d)) | (Line(n, d), Circle(c, r)) => {
            let (p, q) = line_points(*n, *d);
            circle_line(*c, *r, p, q).into_iter().map(|(x, _)| x).collect()
        }
        (Circle(c, r), Edge(p, q)) | (Edge(p, q), Circle(c, r)) => circle_line(*c, *r, *p, *q)
            .into_iter()
            .filter(|(_, t)| (0.0..=1.0).contains(t))
            .map(|(x, _)| x)
            .collect(),
        (Line(n1, d1), Line(n2, d2)) => {
            let det = n1.cross(*n2);
            if det == 0.0 {
                return Vec::new();
            }
            vec![Point::new((d1 * n2.y - d2 * n1.y) / det, (n1.x * d2 - n2.x * d1) / det)]
        }
        (Line(n, d), Edge(p, q)) | (Edge(p, q), Line(n, d)) => {
            let (fp, fq) = (n.dot(*p) - d, n.dot(*q) - d);
            if fp == fq || fp.signum() == fq.signum() && fp != 0.0 && fq != 0.0 {
                return Vec::new();
            }
            let t = fp / (fp - fq);
            vec![*p + t * (*q - *p)]
        }
        (Edge(p1, q1), Edge(p2, q2)) => {
            let e1 = *q1 - *p1;
            let e2 = *q2 - *p2;
            let det = e1.cross(e2);
            if det == 0.0 {
                return Vec::new();
            }
            let t = (*p2 - *p1).cross(e2) / det;
            let u = (*p2 - *p1).cross(e1) / det;
            if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
                vec![*p1 + t * e1]
            } else {
                Vec::new()
            }
        }
    }
}

/// Shoelace area, positive for counter-clockwise vertices.
pub fn signed_area(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    0.5 * (0..n)
        .map(|i| vertices[i].cross(vertices[(i + 1) % n]))
        .sum::<f64>()
}

fn segments_cross(p: Point, q: Point, a: Point, b: Point) -> bool {
    let d1 = (q - p).cross(a - p);
    let d2 = (q - p).cross(b - p);
    let d3 = (b - a).cross(p - a);
    let d4 = (b - a).cross(q - a);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

fn polygon_contains(vertices: &[Point], p: Point) -> bool {
    let n = vertices.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

fn polygon_ray(vertices: &[Point], origin: Point, dir: &Direction) -> Intervals {
    let n = vertices.len();
    let mut cuts = vec![0.0];
    for i in 0..n {
        let (p, q) = (vertices[i], vertices[(i + 1) % n]);
        let e = q - p;
        // u × e and (p - o) × e, (p - o) × u via dot products with the direction
        let ue = dir.dot(Point::new(e.y, -e.x));
        if ue == 0.0 {
            continue;
        }
        let po = p - origin;
        let r = po.cross(e) / ue;
        let t = dir.dot(po.perp()) / ue;
        if r > 0.0 && (-1e-12..=1.0 + 1e-12).contains(&t) {
            cuts.push(r);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let u = dir.vector();
    let mut pieces = Vec::new();
    for (k, &a) in cuts.iter().enumerate() {
        let b = cuts.get(k + 1).copied().unwrap_or(f64::INFINITY);
        let probe = if b.is_finite() { 0.5 * (a + b) } else { 2.0 * a + 1.0 };
        if polygon_contains(vertices, origin + probe * u) {
            pieces.push((a, b));
        }
    }
    Intervals(pieces).union(&Intervals::empty())
}

/// Angle of `p - origin` in `[0, 2pi)`.
pub fn polar_angle(origin: Point, p: Point) -> f64 {
    (p - origin).angle().rem_euclid(TAU)
}
