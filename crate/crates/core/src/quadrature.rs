//! Globally adaptive Gauss–Kronrod quadrature.
//!
//! Every integral in the crate goes through [`integrate`] or
//! [`integrate_segments`]. The integrand is fallible so that nested
//! quadratures can propagate their own failures outward.
//!
//! The panel rule is the 21-point Kronrod extension of the 10-point Gauss rule;
//! the error estimate is the QUADPACK rescaling of `|K21 - G10|`. Panels are
//! refined by bisection in order of decreasing error until the summed error
//! falls below `max(abs_tol, rel_tol * |I|)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::summation::NeumaierSum;

/// Accuracy policy shared by every integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Radius at which improper radial integrals switch to the `r -> cut/r`
    /// map onto a bounded interval.
    pub far_field_cut: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
            far_field_cut: 2.0,
        }
    }
}

impl QuadratureSpec {
    pub fn new(
        abs_tol: f64,
        rel_tol: f64,
        max_subdivisions: usize,
        far_field_cut: f64,
    ) -> Result<Self> {
        let spec = Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
            far_field_cut,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Default spec with both tolerances set to `tol`.
    pub fn with_tolerance(tol: f64) -> Result<Self> {
        Self::new(tol, tol, Self::default().max_subdivisions, 2.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) {
            return Err(Error::InvalidSpec("tolerances must be non-negative"));
        }
        if !(self.abs_tol + self.rel_tol > 0.0) {
            return Err(Error::InvalidSpec("abs_tol + rel_tol must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidSpec("max_subdivisions must be positive"));
        }
        if !(self.far_field_cut > 1.0 && self.far_field_cut.is_finite()) {
            return Err(Error::InvalidSpec("far_field_cut must be finite and > 1"));
        }
        Ok(())
    }

    /// Tighter spec for an integral nested inside another one, so that the
    /// outer error estimator does not see inner noise.
    pub fn nested(&self) -> Self {
        Self {
            abs_tol: self.abs_tol * 0.1,
            rel_tol: (self.rel_tol * 0.1).max(1e-14),
            ..*self
        }
    }

    /// The larger of the two tolerances scaled to `value`.
    pub fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
}

// Kronrod abscissae (positive half, descending) and weights; odd indices are
// the 10-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_067_036_463,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn gauss_kronrod_21<F>(f: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center)?;
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    let mut res_gauss = 0.0;
    let mut res_kronrod = f_center * WGK[10];
    let mut res_abs = res_kronrod.abs();

    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x)?;
        let f2 = f(center + x)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_kronrod * half;
    if !value.is_finite() {
        return Err(Error::NonIntegrable(format!(
            "non-finite integrand on [{a}, {b}]"
        )));
    }
    let err = (res_kronrod - res_gauss) * half;
    let error = rescale_error(err, res_abs * half.abs(), res_asc * half.abs());
    Ok(Panel { a, b, value, error })
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_with_breaks(f, &[a, b], spec)
}

/// Integrates `f` over `[points[0], points[last]]`, using the interior points
/// as initial panel boundaries. `points` must be sorted ascending.
pub fn integrate_with_breaks<F>(mut f: F, points: &[f64], spec: &QuadratureSpec) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.validate()?;
    if points.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two integration limits".into(),
        ));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidArgument(
            "integration limits must be finite".into(),
        ));
    }

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in points.windows(2) {
        if w[1] < w[0] {
            return Err(Error::InvalidArgument("breakpoints must be ascending".into()));
        }
        if w[1] > w[0] {
            heap.push(gauss_kronrod_21(&mut f, w[0], w[1])?);
            evaluations += 21;
        }
    }
    let mut frozen: Vec<Panel> = Vec::new();
    let mut subdivisions = 0;

    loop {
        let (value, error) = totals(heap.iter().chain(frozen.iter()));
        if error <= spec.tolerance_for(value) {
            return Ok(Estimate {
                value,
                error,
                evaluations,
                subdivisions,
            });
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => {
                return Err(Error::ToleranceNotMet {
                    estimate: value,
                    error,
                    subdivisions,
                })
            }
        };
        if subdivisions >= spec.max_subdivisions {
            heap.push(worst);
            return Err(Error::ToleranceNotMet {
                estimate: value,
                error,
                subdivisions,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        // panel can no longer be split in floating point
        if !(mid > worst.a && mid < worst.b)
            || (worst.b - worst.a) <= 1e3 * f64::EPSILON * worst.a.abs().max(worst.b.abs())
        {
            frozen.push(worst);
            continue;
        }
        heap.push(gauss_kronrod_21(&mut f, worst.a, mid)?);
        heap.push(gauss_kronrod_21(&mut f, mid, worst.b)?);
        evaluations += 42;
        subdivisions += 1;
    }
}

fn totals<'a, I: Iterator<Item = &'a Panel>>(panels: I) -> (f64, f64) {
    let mut value = NeumaierSum::new();
    let mut error = 0.0;
    for p in panels {
        value.add(p.value);
        error += p.error;
    }
    (value.value(), error)
}

/// Endpoint grading applied to one segment of [`integrate_segments`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    None,
    /// Nodes cluster toward the left end.
    Left,
    /// Nodes cluster toward the right end.
    Right,
    Both,
}

/// One piece of a piecewise-graded integration domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: f64,
    pub b: f64,
    pub grading: Grading,
}

impl Segment {
    pub fn plain(a: f64, b: f64) -> Self {
        Self {
            a,
            b,
            grading: Grading::None,
        }
    }

    /// Maps `tau` in `[0, 1]` into the segment; returns the point and the
    /// Jacobian of the map.
    fn map(&self, tau: f64, power: f64) -> (SegmentPoint, f64) {
        let width = self.b - self.a;
        // (w, 1 - w, dw/dtau), with 1 - w formed without cancellation
        let (w, w_c, dw) = match self.grading {
            Grading::None => (tau, 1.0 - tau, 1.0),
            Grading::Left => {
                let w = tau.powf(power);
                (w, 1.0 - w, power * tau.powf(power - 1.0))
            }
            Grading::Right => {
                let u = 1.0 - tau;
                let w_c = u.powf(power);
                (1.0 - w_c, w_c, power * u.powf(power - 1.0))
            }
            Grading::Both => {
                let p = tau.powf(power);
                let q = (1.0 - tau).powf(power);
                let d = p + q;
                let dw = power * (tau * (1.0 - tau)).powf(power - 1.0) / (d * d);
                (p / d, q / d, dw)
            }
        };
        let from_a = width * w;
        let from_b = width * w_c;
        let x = if w <= 0.5 { self.a + from_a } else { self.b - from_b };
        (SegmentPoint { index: 0, x, from_a, from_b }, width * dw)
    }
}

/// A quadrature node inside a [`Segment`], with its distances to both ends
/// carried separately so that an integrand singular at an end can be
/// evaluated without cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentPoint {
    /// Position of the segment in the slice passed to [`integrate_segments`].
    pub index: usize,
    pub x: f64,
    pub from_a: f64,
    pub from_b: f64,
}

/// Integrates `f` over a union of segments, each with its own endpoint
/// grading `x = a + (b - a) w(tau)` where `w` behaves like `tau^power` at a
/// graded end. An integrand with an `|x - end|^(-beta)` singularity becomes
/// bounded once `power * (1 - beta) >= 1`.
///
/// All segments share one global error budget.
pub fn integrate_segments<F>(
    mut f: F,
    segments: &[Segment],
    power: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate>
where
    F: FnMut(SegmentPoint) -> Result<f64>,
{
    if segments.is_empty() {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
            subdivisions: 0,
        });
    }
    if !(power >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "grading power must be >= 1, got {power}"
        )));
    }
    let breaks: Vec<f64> = (0..=segments.len()).map(|k| k as f64).collect();
    let n = segments.len();
    integrate_with_breaks(
        |t| {
            let k = (t.floor() as usize).min(n - 1);
            let seg = &segments[k];
            let (mut pt, jac) = seg.map(t - k as f64, power);
            pt.index = k;
            // a graded node that underflows onto an end carries no weight
            if jac == 0.0 || pt.from_a == 0.0 || pt.from_b == 0.0 {
                return Ok(0.0);
            }
            Ok(f(pt)? * jac)
        },
        &breaks,
        spec,
    )
}
