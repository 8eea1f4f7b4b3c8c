//! Argument-principle zero counting on circles.
//!
//! The number of zeros of a holomorphic `f` inside a region bounded by
//! oriented circles is `(1/2πi) ∮ f'/f dz`. On a circle the integrand is a
//! periodic analytic function of the angle, so the equispaced trapezoidal
//! rule converges geometrically; this is what every count here uses.
//!
//! On top of the counter sit a boundary-dominance test (if `|g| < |f|` on the
//! boundary then `f` and `f + g` have the same number of zeros) and a
//! numerical injectivity certificate for maps on an annulus: `f` is univalent
//! iff `f − w` has at most one zero for every target `w`, which is checked on
//! a grid of targets.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::planar::AnnulusSpec;

/// `|f|` below this on a sample point means a zero may sit on the contour.
pub const GUARD_THRESHOLD: f64 = 1e-9;
/// Quadrature values farther than this from an integer are not snapped.
pub const SNAP_WINDOW: f64 = 0.1;
/// Two successive doublings agreeing to this are considered converged.
pub const STABILITY: f64 = 1e-8;
pub const MIN_SAMPLES: usize = 64;
pub const MAX_SAMPLES: usize = 1 << 16;
/// Safety factor in the boundary-dominance test.
pub const DOMINANCE_FACTOR: f64 = 1.05;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RoucheError {
    #[error("contour radius {0} must be positive and finite")]
    InvalidRadius(f64),
    #[error("sample count {0} must be a power of two no smaller than 64")]
    InvalidSampleCount(usize),
    #[error("|f| = {modulus:e} at {at} on the contour is below the guard threshold")]
    GuardViolation { modulus: f64, at: Complex64 },
    #[error("quadrature value {value} is {residual} away from the nearest integer")]
    NonIntegerResidual { value: Complex64, residual: f64 },
    #[error("quadrature did not stabilise by {samples} samples (last change {change:e})")]
    Unconverged { samples: usize, change: f64 },
    #[error("map is not finite at {0} on the contour")]
    NotEvaluable(Complex64),
    #[error("target grid must have at least one point per side")]
    EmptyGrid,
}

/// A map together with its derivative, both defined near the contours.
pub trait HolomorphicMap {
    fn eval(&self, z: Complex64) -> Complex64;
    fn derivative(&self, z: Complex64) -> Complex64;
}

impl<T: HolomorphicMap + ?Sized> HolomorphicMap for &T {
    fn eval(&self, z: Complex64) -> Complex64 {
        (**self).eval(z)
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        (**self).derivative(z)
    }
}

/// A map given by two closures: the function and its derivative.
pub struct SampledMap<F, D> {
    evaluator: F,
    derivative_evaluator: D,
}

impl<F, D> SampledMap<F, D>
where
    F: Fn(Complex64) -> Complex64,
    D: Fn(Complex64) -> Complex64,
{
    pub fn new(evaluator: F, derivative_evaluator: D) -> Self {
        Self {
            evaluator,
            derivative_evaluator,
        }
    }
}

impl<F, D> HolomorphicMap for SampledMap<F, D>
where
    F: Fn(Complex64) -> Complex64,
    D: Fn(Complex64) -> Complex64,
{
    fn eval(&self, z: Complex64) -> Complex64 {
        (self.evaluator)(z)
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        (self.derivative_evaluator)(z)
    }
}

/// `f + g`
pub struct SumMap<A, B>(pub A, pub B);

impl<A: HolomorphicMap, B: HolomorphicMap> HolomorphicMap for SumMap<A, B> {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.0.eval(z) + self.1.eval(z)
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        self.0.derivative(z) + self.1.derivative(z)
    }
}

/// `f − w` for a constant target `w`.
pub struct ShiftedMap<M> {
    pub map: M,
    pub target: Complex64,
}

impl<M: HolomorphicMap> HolomorphicMap for ShiftedMap<M> {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.map.eval(z) - self.target
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        self.map.derivative(z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
}

impl Orientation {
    fn sign(self) -> f64 {
        match self {
            Orientation::CounterClockwise => 1.0,
            Orientation::Clockwise => -1.0,
        }
    }
}

/// An oriented, equispaced-sampled circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleContour {
    center: Complex64,
    radius: f64,
    orientation: Orientation,
    samples: usize,
}

impl CircleContour {
    pub fn new(center: Complex64, radius: f64, samples: usize) -> Result<Self, RoucheError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(RoucheError::InvalidRadius(radius));
        }
        check_samples(samples)?;
        Ok(Self {
            center,
            radius,
            orientation: Orientation::CounterClockwise,
            samples,
        })
    }

    /// The origin-centred circle of the given radius.
    pub fn centered(radius: f64, samples: usize) -> Result<Self, RoucheError> {
        Self::new(Complex64::new(0.0, 0.0), radius, samples)
    }

    pub fn reversed(mut self) -> Self {
        self.orientation = match self.orientation {
            Orientation::CounterClockwise => Orientation::Clockwise,
            Orientation::Clockwise => Orientation::CounterClockwise,
        };
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Result<Self, RoucheError> {
        check_samples(samples)?;
        self.samples = samples;
        Ok(self)
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    /// Sample points `center + radius·e^{2πik/n}`.
    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        let n = self.samples;
        (0..n).map(move |k| self.center + Complex64::from_polar(self.radius, 2.0 * PI * k as f64 / n as f64))
    }
}

fn check_samples(samples: usize) -> Result<(), RoucheError> {
    if samples >= MIN_SAMPLES && samples.is_power_of_two() {
        Ok(())
    } else {
        Err(RoucheError::InvalidSampleCount(samples))
    }
}

/// The positively oriented boundary of `{r < |z| < 1}`: the unit circle
/// counter-clockwise and the inner circle clockwise.
pub fn annulus_boundary(annulus: AnnulusSpec, samples: usize) -> Result<[CircleContour; 2], RoucheError> {
    Ok([
        CircleContour::centered(1.0, samples)?,
        CircleContour::centered(annulus.inner_radius(), samples)?.reversed(),
    ])
}

/// An argument-principle count with the raw quadrature value kept alongside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroCount {
    pub count: i64,
    /// `(1/2πi) ∮ f'/f` before rounding.
    pub value: Complex64,
    /// Distance of `value` from `count`.
    pub residual: f64,
    /// Samples per circle used for `value`.
    pub samples: usize,
    /// Smallest `|f|` seen on the contour.
    pub min_modulus: f64,
}

struct Integral {
    value: Complex64,
    min_modulus: f64,
}

fn integrate<M: HolomorphicMap>(f: &M, contours: &[CircleContour], samples: Option<usize>) -> Result<Integral, RoucheError> {
    let mut total = Complex64::new(0.0, 0.0);
    let mut min_modulus = f64::INFINITY;
    for c in contours {
        let n = samples.unwrap_or(c.samples);
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let offset = Complex64::from_polar(c.radius, 2.0 * PI * k as f64 / n as f64);
            let z = c.center + offset;
            let fz = f.eval(z);
            let dfz = f.derivative(z);
            if !(fz.re.is_finite() && fz.im.is_finite() && dfz.re.is_finite() && dfz.im.is_finite()) {
                return Err(RoucheError::NotEvaluable(z));
            }
            let m = fz.norm();
            min_modulus = min_modulus.min(m);
            if m < GUARD_THRESHOLD {
                return Err(RoucheError::GuardViolation { modulus: m, at: z });
            }
            // dz = i·offset·dθ, so (1/2πi)∮ f'/f dz = (1/2π)∫ f'/f · offset dθ
            sum += dfz / fz * offset;
        }
        total += sum * (c.orientation.sign() / n as f64);
    }
    Ok(Integral {
        value: total,
        min_modulus,
    })
}

fn snap(integral: Integral, samples: usize) -> Result<ZeroCount, RoucheError> {
    let nearest = integral.value.re.round();
    let residual = (integral.value - Complex64::new(nearest, 0.0)).norm();
    if residual > SNAP_WINDOW || !residual.is_finite() {
        return Err(RoucheError::NonIntegerResidual {
            value: integral.value,
            residual,
        });
    }
    Ok(ZeroCount {
        count: nearest as i64,
        value: integral.value,
        residual,
        samples,
        min_modulus: integral.min_modulus,
    })
}

/// Zeros (with multiplicity) of `f` inside the region bounded by `contours`,
/// using each contour's own sample count.
pub fn zero_count<M: HolomorphicMap>(f: &M, contours: &[CircleContour]) -> Result<ZeroCount, RoucheError> {
    let integral = integrate(f, contours, None)?;
    let samples = contours.iter().map(|c| c.samples).max().unwrap_or(0);
    snap(integral, samples)
}

/// Like [`zero_count`], but doubles the sample count (starting from the
/// largest contour setting) until two successive values agree to
/// [`STABILITY`], up to [`MAX_SAMPLES`].
pub fn zero_count_adaptive<M: HolomorphicMap>(f: &M, contours: &[CircleContour]) -> Result<ZeroCount, RoucheError> {
    let mut n = contours.iter().map(|c| c.samples).max().unwrap_or(MIN_SAMPLES);
    let mut previous = integrate(f, contours, Some(n))?;
    let mut change = f64::NAN;
    while n < MAX_SAMPLES {
        n *= 2;
        let next = integrate(f, contours, Some(n))?;
        change = (next.value - previous.value).norm();
        if change < STABILITY {
            return snap(next, n);
        }
        previous = next;
    }
    Err(RoucheError::Unconverged { samples: n, change })
}

/// True iff `1.05 · max|g| < min|f|` over all contour samples.
///
/// When this holds, `f` and `f + g` have the same number of zeros inside.
pub fn rouche_dominance<F: HolomorphicMap, G: HolomorphicMap>(f: &F, g: &G, contours: &[CircleContour]) -> bool {
    let mut min_f = f64::INFINITY;
    let mut max_g = 0.0_f64;
    for c in contours {
        for z in c.points() {
            min_f = min_f.min(f.eval(z).norm());
            max_g = max_g.max(g.eval(z).norm());
        }
    }
    DOMINANCE_FACTOR * max_g < min_f
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateStatus {
    Certified,
    Refuted,
    Inconclusive,
}

/// Outcome of the grid-of-targets univalence test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InjectivityCertificate {
    pub status: CertificateStatus,
    pub grid_size: usize,
    /// Smallest `|f − w|` over all boundary samples and all targets.
    pub min_boundary_modulus: f64,
    /// Largest zero count seen over the targets that produced a count.
    pub max_count: i64,
    /// Targets whose count could not be established.
    pub inconclusive_targets: usize,
    /// Whether the sampled images of the two boundary circles are disjoint
    /// simple closed polygons.
    pub boundary_simple: bool,
}

impl InjectivityCertificate {
    pub fn is_certified(&self) -> bool {
        self.status == CertificateStatus::Certified
    }
}

/// Boundary samples of `f` on the annulus boundary at one resolution.
struct Level {
    /// `offset · sign / n`, i.e. the quadrature weight times `dz/(i dθ)`.
    weights: Vec<Complex64>,
    values: Vec<Complex64>,
    derivatives: Vec<Complex64>,
}

/// Samples at every power-of-two resolution, computed on first use.
struct BoundaryCache<'a, M> {
    map: &'a M,
    contours: [CircleContour; 2],
    levels: Vec<OnceLock<Result<Level, RoucheError>>>,
}

impl<'a, M: HolomorphicMap> BoundaryCache<'a, M> {
    fn new(map: &'a M, annulus: AnnulusSpec) -> Result<Self, RoucheError> {
        let contours = annulus_boundary(annulus, MIN_SAMPLES)?;
        let count = (MAX_SAMPLES / MIN_SAMPLES).trailing_zeros() as usize + 1;
        Ok(Self {
            map,
            contours,
            levels: (0..count).map(|_| OnceLock::new()).collect(),
        })
    }

    fn level(&self, index: usize) -> Result<&Level, RoucheError> {
        self.levels[index]
            .get_or_init(|| {
                let n = MIN_SAMPLES << index;
                let mut level = Level {
                    weights: Vec::with_capacity(2 * n),
                    values: Vec::with_capacity(2 * n),
                    derivatives: Vec::with_capacity(2 * n),
                };
                for c in &self.contours {
                    let sign = c.orientation.sign() / n as f64;
                    for k in 0..n {
                        let offset = Complex64::from_polar(c.radius, 2.0 * PI * k as f64 / n as f64);
                        let z = c.center + offset;
                        let fz = self.map.eval(z);
                        let dfz = self.map.derivative(z);
                        if !(fz.re.is_finite() && fz.im.is_finite() && dfz.re.is_finite() && dfz.im.is_finite()) {
                            return Err(RoucheError::NotEvaluable(z));
                        }
                        level.weights.push(offset * sign);
                        level.values.push(fz);
                        level.derivatives.push(dfz);
                    }
                }
                Ok(level)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn integrate(&self, index: usize, target: Complex64) -> Result<Integral, RoucheError> {
        let level = self.level(index)?;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut min_modulus = f64::INFINITY;
        for ((w, f), df) in level.weights.iter().zip(&level.values).zip(&level.derivatives) {
            let shifted = f - target;
            let m = shifted.norm();
            min_modulus = min_modulus.min(m);
            if m < GUARD_THRESHOLD {
                return Err(RoucheError::GuardViolation {
                    modulus: m,
                    at: *f,
                });
            }
            sum += df / shifted * w;
        }
        Ok(Integral {
            value: sum,
            min_modulus,
        })
    }

    /// Adaptive count of zeros of `f − target` in the annulus.
    fn count(&self, target: Complex64) -> Result<ZeroCount, RoucheError> {
        let mut index = 0;
        let mut previous = self.integrate(index, target)?;
        loop {
            index += 1;
            let n = MIN_SAMPLES << index;
            let next = self.integrate(index, target)?;
            let change = (next.value - previous.value).norm();
            if change < STABILITY {
                return snap(
                    Integral {
                        value: next.value,
                        min_modulus: next.min_modulus.min(previous.min_modulus),
                    },
                    n,
                );
            }
            if index + 1 >= self.levels.len() {
                return Err(RoucheError::Unconverged { samples: n, change });
            }
            previous = next;
        }
    }

    /// Whether the boundary image polygons at `index` are simple and disjoint.
    fn boundary_simple(&self, index: usize) -> Result<bool, RoucheError> {
        let level = self.level(index)?;
        let n = MIN_SAMPLES << index;
        let (outer, inner) = level.values.split_at(n);
        Ok(!polygons_cross(&[outer, inner]))
    }

    /// Bounding box of the sampled boundary image.
    fn bounding_box(&self) -> Result<(Complex64, Complex64), RoucheError> {
        let level = self.level(4)?;
        let mut lo = Complex64::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &level.values {
            lo.re = lo.re.min(v.re);
            lo.im = lo.im.min(v.im);
            hi.re = hi.re.max(v.re);
            hi.im = hi.im.max(v.im);
        }
        Ok((lo, hi))
    }
}

/// Resolution level (`64 · 2^k` samples per circle) of the crossing test.
const CROSSING_LEVEL: usize = 4;

fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    (b - a).re * (c - a).im - (b - a).im * (c - a).re
}

fn on_segment(a: Complex64, b: Complex64, c: Complex64) -> bool {
    c.re >= a.re.min(b.re) && c.re <= a.re.max(b.re) && c.im >= a.im.min(b.im) && c.im <= a.im.max(b.im)
}

/// Closed-segment intersection, touching and collinear overlap included.
fn segments_meet(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

/// Whether any two non-adjacent edges of the closed polygons meet.
fn polygons_cross(polygons: &[&[Complex64]]) -> bool {
    struct Edge {
        polygon: usize,
        index: usize,
        a: Complex64,
        b: Complex64,
        lo: f64,
        hi: f64,
    }
    let mut edges = Vec::new();
    for (polygon, pts) in polygons.iter().enumerate() {
        for index in 0..pts.len() {
            let (a, b) = (pts[index], pts[(index + 1) % pts.len()]);
            edges.push(Edge {
                polygon,
                index,
                a,
                b,
                lo: a.re.min(b.re),
                hi: a.re.max(b.re),
            });
        }
    }
    edges.sort_by(|x, y| x.lo.total_cmp(&y.lo));
    for (i, e) in edges.iter().enumerate() {
        for f in &edges[i + 1..] {
            if f.lo > e.hi {
                break;
            }
            if e.polygon == f.polygon {
                let len = polygons[e.polygon].len();
                let gap = e.index.abs_diff(f.index);
                if gap == 1 || gap == len - 1 {
                    continue;
                }
            }
            if segments_meet(e.a, e.b, f.a, f.b) {
                return true;
            }
        }
    }
    false
}

/// Numerical univalence test for `f` on the closed annulus.
///
/// Targets are the cell centres of a `target_grid × target_grid` grid over
/// the bounding box of `f(∂A)`, which contains `f(A)` because `Re f` and
/// `Im f` are harmonic. For each target the zeros of `f − w` inside the
/// annulus are counted adaptively. Any count of two or more refutes
/// injectivity; certification needs every count in `{0, 1}` with the guard
/// intact everywhere, and the sampled boundary images must be disjoint
/// simple polygons (a grid can step over small doubly covered loops). A
/// failed count never certifies.
pub fn injectivity_certificate<M: HolomorphicMap>(
    f: &M,
    annulus: AnnulusSpec,
    target_grid: usize,
) -> Result<InjectivityCertificate, RoucheError> {
    if target_grid == 0 {
        return Err(RoucheError::EmptyGrid);
    }
    let cache = BoundaryCache::new(f, annulus)?;
    let (lo, hi) = cache.bounding_box()?;
    // a small margin so the box is not degenerate for thin images
    let pad = 1e-3 * ((hi - lo).norm() + 1e-3);
    let lo = lo - Complex64::new(pad, pad);
    let hi = hi + Complex64::new(pad, pad);
    let step = Complex64::new((hi.re - lo.re) / target_grid as f64, (hi.im - lo.im) / target_grid as f64);

    let mut min_boundary_modulus = f64::INFINITY;
    let mut max_count = i64::MIN;
    let mut inconclusive = 0;
    let mut refuted = false;
    for i in 0..target_grid {
        for j in 0..target_grid {
            let target = Complex64::new(
                lo.re + (i as f64 + 0.5) * step.re,
                lo.im + (j as f64 + 0.5) * step.im,
            );
            match cache.count(target) {
                Ok(c) => {
                    min_boundary_modulus = min_boundary_modulus.min(c.min_modulus);
                    max_count = max_count.max(c.count);
                    if c.count >= 2 {
                        refuted = true;
                    } else if c.count < 0 {
                        inconclusive += 1;
                    }
                }
                Err(RoucheError::GuardViolation { modulus, .. }) => {
                    min_boundary_modulus = min_boundary_modulus.min(modulus);
                    inconclusive += 1;
                }
                Err(RoucheError::NonIntegerResidual { .. }) | Err(RoucheError::Unconverged { .. }) => {
                    inconclusive += 1;
                }
                Err(e) => return Err(e),
            }
        }
    }
    let boundary_simple = cache.boundary_simple(CROSSING_LEVEL)?;
    let status = if refuted {
        CertificateStatus::Refuted
    } else if inconclusive == 0 && boundary_simple {
        CertificateStatus::Certified
    } else {
        CertificateStatus::Inconclusive
    };
    Ok(InjectivityCertificate {
        status,
        grid_size: target_grid,
        min_boundary_modulus,
        max_count,
        inconclusive_targets: inconclusive,
        boundary_simple,
    })
}
