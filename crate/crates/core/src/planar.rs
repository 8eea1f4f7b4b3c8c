//! Certified bounds for planar domains.
//!
//! Everything here is a closed-form consequence of comparing Poincaré
//! discs: a hyperbolic disc of radius `t` around `z` that fits inside the
//! domain yields the lower bound `s(z) ≥ σ⁻¹(t)`, and a removable point at
//! distance `t` yields the upper bound `s(z) ≤ σ⁻¹(t)`.
//!
//! Annulus queries are folded into the fundamental range `[√r, 1)` with the
//! reflection `z ↦ r/z` before evaluation.

use std::ops::RangeInclusive;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::{BoundCertificate, BoundTag, CertificateRangeError};
use crate::hyperbolic::{
    hyperbolic_gap, kobayashi_ball, metric_T, mobius, sigma_inv, BallPoint, DiscPoint, HyperbolicError,
    HyperbolicValue, TOLERANCE,
};

/// Grid resolution for the `c(u, v, w)` infimum before golden-section refinement.
pub const C_CONSTANT_GRID: usize = 1024;
/// Bracket width at which golden-section refinement stops.
pub const C_CONSTANT_WIDTH: f64 = 1e-12;
/// Euclidean gap required between excised-disc images.
pub const SEPARATION_MARGIN: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanarError {
    #[error("annulus inner radius {0} must lie in (0, 1)")]
    InvalidAnnulus(f64),
    #[error("|z| = {modulus} is outside the annulus ({inner}, 1)")]
    PointOutsideAnnulus { modulus: f64, inner: f64 },
    #[error("rho = {rho} is below the fundamental range start √r = {start}; fold it first")]
    OutOfFundamentalRange { rho: f64, start: f64 },
    #[error("parameters must satisfy 0 < u < v < w < 1 (got {u}, {v}, {w})")]
    ParameterOrderViolation { u: f64, v: f64, w: f64 },
    #[error("excision {index} has radius {radius} outside ({u}, {v})")]
    ExcisionRadius { index: usize, radius: f64, u: f64, v: f64 },
    #[error("excisions {0} and {1} overlap after enlarging to radius w")]
    OverlappingExcisions(usize, usize),
    #[error("point {0} is not in the domain")]
    PointNotInDomain(Complex64),
    #[error("the point is a puncture of the domain")]
    PunctureEvaluation,
    #[error("punctures {0} and {1} coincide")]
    DuplicatePuncture(usize, usize),
    #[error("point lies on the boundary (δ = 0)")]
    BoundaryPoint,
    #[error("constant C = {0} must be positive")]
    NonPositiveConstant(f64),
    #[error("sample point {0} has boundary distance {1} ≥ 1")]
    SampleTooDeep(Complex64, f64),
    #[error("lower bound {0} must lie in (0, 1]")]
    InvalidLowerBound(f64),
    #[error("exact squeezing with computable distance needs dimension ≥ 2 for punctured balls (got {0})")]
    UnsupportedDomain(usize),
    #[error(transparent)]
    Hyperbolic(#[from] HyperbolicError),
    #[error(transparent)]
    Certificate(#[from] CertificateRangeError),
}

/// The annulus `A_r = {r < |z| < 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusSpec {
    r: f64,
}

/// Result of folding a modulus into `[√r, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Folded {
    pub rho: f64,
    pub reflected: bool,
}

impl AnnulusSpec {
    pub fn new(r: f64) -> Result<Self, PlanarError> {
        if r > 0.0 && r < 1.0 {
            Ok(Self { r })
        } else {
            Err(PlanarError::InvalidAnnulus(r))
        }
    }

    pub fn inner_radius(&self) -> f64 {
        self.r
    }

    /// `√r`, where the reflection `z ↦ r/z` fixes the modulus.
    pub fn fundamental_start(&self) -> f64 {
        self.r.sqrt()
    }

    pub fn contains_modulus(&self, modulus: f64) -> bool {
        modulus > self.r && modulus < 1.0
    }

    fn check(&self, modulus: f64) -> Result<(), PlanarError> {
        if self.contains_modulus(modulus) {
            Ok(())
        } else {
            Err(PlanarError::PointOutsideAnnulus {
                modulus,
                inner: self.r,
            })
        }
    }

    /// Map a modulus in `(r, 1)` to `[√r, 1)` via `ρ ↦ r/ρ` if needed.
    pub fn fold(&self, modulus: f64) -> Folded {
        if modulus >= self.fundamental_start() {
            Folded {
                rho: modulus,
                reflected: false,
            }
        } else {
            Folded {
                rho: self.r / modulus,
                reflected: true,
            }
        }
    }

    /// Distance from `z` to the boundary circles.
    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        let m = z.norm();
        (1.0 - m).min(m - self.r)
    }
}

/// Lower bound on `s_{A_r}(z)` from the Poincaré disc around `z` that
/// avoids the inner circle, symmetrised by `z ↦ r/z`:
///
/// `max(σ⁻¹(σ(|z|) − σ(r)), σ⁻¹(σ(r/|z|) − σ(r)))`.
pub fn annulus_lower_bound(annulus: AnnulusSpec, z: Complex64) -> Result<BoundCertificate, PlanarError> {
    let modulus = z.norm();
    annulus.check(modulus)?;
    let folded = annulus.fold(modulus);
    let value = hyperbolic_gap(folded.rho, annulus.r);
    let branch = if folded.reflected { "reflected" } else { "direct" };
    Ok(BoundCertificate::new(value, BoundTag::Lower, "annulus-poincare-disc")?
        .with("r", annulus.r)
        .with("modulus", modulus)
        .with("folded_rho", folded.rho)
        .with("branch", branch))
}

/// The conjectured closed form `σ⁻¹(σ(ρ) − σ(r))` on `[√r, 1)`.
///
/// It is a proven lower bound; that it is the exact value is open, so the
/// certificate is tagged `lower`.
pub fn annulus_conjectured_value(annulus: AnnulusSpec, rho: f64) -> Result<BoundCertificate, PlanarError> {
    let start = annulus.fundamental_start();
    if rho < start {
        return Err(PlanarError::OutOfFundamentalRange { rho, start });
    }
    annulus.check(rho)?;
    let value = hyperbolic_gap(rho, annulus.r);
    Ok(BoundCertificate::new(value, BoundTag::Lower, "annulus-conjecture")?
        .with("r", annulus.r)
        .with("rho", rho)
        .with("status", "conjectured exact"))
}

/// The conjectured minimum `tanh log((1 + √r)/√(1 + r))`, attained at `ρ = √r`.
pub fn annulus_minimum_closed_form(annulus: AnnulusSpec) -> f64 {
    let q = annulus.r.sqrt();
    ((1.0 + q) / (1.0 + annulus.r).sqrt()).ln().tanh()
}

fn check_order(u: f64, v: f64, w: f64) -> Result<(), PlanarError> {
    if 0.0 < u && u < v && v < w && w < 1.0 {
        Ok(())
    } else {
        Err(PlanarError::ParameterOrderViolation { u, v, w })
    }
}

/// `σ⁻¹(σ(r/v) − σ(r/w))`; equals one at `r = v`.
fn c_objective(r: f64, v: f64, w: f64) -> f64 {
    hyperbolic_gap((r / v).min(1.0), r / w)
}

/// `c(u, v, w) = inf_{u ≤ r ≤ v} σ⁻¹(σ(r/v) − σ(r/w))`.
///
/// A [`C_CONSTANT_GRID`]-point scan locates the smallest grid value, then
/// golden-section search refines inside the neighbouring cells.
pub fn c_constant(u: f64, v: f64, w: f64) -> Result<f64, PlanarError> {
    check_order(u, v, w)?;
    let f = |r: f64| c_objective(r, v, w);
    let n = C_CONSTANT_GRID;
    let h = (v - u) / (n - 1) as f64;
    let at = |i: usize| if i + 1 == n { v } else { u + i as f64 * h };
    let (best_i, best) = (0..n)
        .map(|i| (i, f(at(i))))
        .fold((0, f64::INFINITY), |acc, (i, y)| if y < acc.1 { (i, y) } else { acc });
    let lo = at(best_i.saturating_sub(1));
    let hi = at((best_i + 1).min(n - 1));
    let refined = golden_section_min(f, lo, hi, C_CONSTANT_WIDTH);
    Ok(best.min(refined))
}

/// Minimum of a unimodal `f` on `[a, b]`, including the endpoints.
fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, width: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut best = f(a).min(f(b));
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > width {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
        best = best.min(f1).min(f2);
    }
    best
}

/// Euclidean centre and radius of the image of `|z| = ρ` under `disc_mobius(a, ·)`.
pub fn mobius_circle_image(a: DiscPoint, rho: f64) -> (Complex64, f64) {
    // the image is {w : |φ_{−a}(w)| = ρ}, a circle about −a(1−ρ²)/(1−ρ²|a|²)
    let a2 = a.z().norm_sqr();
    let denom = 1.0 - rho * rho * a2;
    let center = -a.z() * ((1.0 - rho * rho) / denom);
    let radius = rho * (1.0 - a2) / denom;
    (center, radius)
}

/// One excised disc: the image of `|z| ≤ radius` under the automorphism
/// `z ↦ (z + a)/(1 + āz)` that sends `0` to `a = center`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Excision {
    pub center: DiscPoint,
    pub radius: f64,
}

impl Excision {
    fn pullback_modulus(&self, z: Complex64) -> f64 {
        mobius(self.center.z(), z).norm()
    }

    /// Euclidean circle bounding the automorphism image of `|z| ≤ rho`.
    pub fn image_circle(&self, rho: f64) -> (Complex64, f64) {
        let minus = DiscPoint::new(-self.center.z()).expect("negation preserves the disc");
        mobius_circle_image(minus, rho)
    }
}

/// `Δ` minus finitely many automorphism images of closed discs, with
/// radii in `(u, v)` and pairwise disjoint images at radius `w`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcisedDiscDomainSpec {
    u: f64,
    v: f64,
    w: f64,
    excisions: Vec<Excision>,
}

/// Which of the two estimates applies at a point of an excised domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExcisedRegion {
    Near(usize),
    Far,
}

impl ExcisedDiscDomainSpec {
    pub fn new(u: f64, v: f64, w: f64, excisions: Vec<Excision>) -> Result<Self, PlanarError> {
        check_order(u, v, w)?;
        for (index, e) in excisions.iter().enumerate() {
            if !(e.radius > u && e.radius < v) {
                return Err(PlanarError::ExcisionRadius {
                    index,
                    radius: e.radius,
                    u,
                    v,
                });
            }
        }
        let circles: Vec<_> = excisions.iter().map(|e| e.image_circle(w)).collect();
        for i in 0..circles.len() {
            for j in i + 1..circles.len() {
                let (ci, ri) = circles[i];
                let (cj, rj) = circles[j];
                if (ci - cj).norm() <= ri + rj + SEPARATION_MARGIN {
                    return Err(PlanarError::OverlappingExcisions(i, j));
                }
            }
        }
        Ok(Self { u, v, w, excisions })
    }

    pub fn parameters(&self) -> (f64, f64, f64) {
        (self.u, self.v, self.w)
    }

    pub fn excisions(&self) -> &[Excision] {
        &self.excisions
    }

    fn mid(&self) -> f64 {
        0.5 * (self.v + self.w)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.norm() < 1.0 && self.excisions.iter().all(|e| e.pullback_modulus(z) > e.radius)
    }

    pub fn region(&self, z: Complex64) -> ExcisedRegion {
        let mid = self.mid();
        self.excisions
            .iter()
            .position(|e| e.pullback_modulus(z) < mid)
            .map_or(ExcisedRegion::Far, ExcisedRegion::Near)
    }

    /// `c(u, (v+w)/2, w)`, the estimate near an excision.
    pub fn near_constant(&self) -> f64 {
        c_constant(self.u, self.mid(), self.w).expect("validated parameter order")
    }

    /// `σ⁻¹(σ((v+w)/2) − σ(v))`, the estimate away from every excision.
    pub fn far_constant(&self) -> f64 {
        hyperbolic_gap(self.mid(), self.v)
    }
}

/// `f(z) = (z + 1/2)/(1 + z/2)` iterated over `iterates`, each excising the
/// image of `|z| ≤ 1/4`. `f^k(0) = tanh(k · atanh(1/2))`.
pub fn krantz_configuration(
    u: f64,
    v: f64,
    w: f64,
    iterates: RangeInclusive<i32>,
    skip_identity: bool,
) -> Result<ExcisedDiscDomainSpec, PlanarError> {
    let step = 0.5f64.atanh();
    let excisions = iterates
        .filter(|&k| !(skip_identity && k == 0))
        .map(|k| {
            Ok(Excision {
                center: DiscPoint::from_re_im((k as f64 * step).tanh(), 0.0)?,
                radius: 0.25,
            })
        })
        .collect::<Result<Vec<_>, PlanarError>>()?;
    ExcisedDiscDomainSpec::new(u, v, w, excisions)
}

/// Two-case lower bound on an excised-disc domain.
pub fn excised_domain_lower_bound(domain: &ExcisedDiscDomainSpec, z: Complex64) -> Result<BoundCertificate, PlanarError> {
    if !domain.contains(z) {
        return Err(PlanarError::PointNotInDomain(z));
    }
    let (u, v, w) = domain.parameters();
    let cert = match domain.region(z) {
        ExcisedRegion::Near(k) => BoundCertificate::new(domain.near_constant(), BoundTag::Lower, "excised-near")?
            .with("region", "near")
            .with("excision", k as f64),
        ExcisedRegion::Far => {
            BoundCertificate::new(domain.far_constant(), BoundTag::Lower, "excised-far")?.with("region", "far")
        }
    };
    Ok(cert.with("u", u).with("v", v).with("w", w))
}

/// The unit ball of `ℂⁿ` with finitely many points removed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PuncturedDomainSpec {
    dimension: usize,
    punctures: Vec<BallPoint>,
}

impl PuncturedDomainSpec {
    pub fn new(dimension: usize, punctures: Vec<BallPoint>) -> Result<Self, PlanarError> {
        if dimension == 0 {
            return Err(HyperbolicError::ZeroDimension.into());
        }
        for p in &punctures {
            if p.dimension() != dimension {
                return Err(HyperbolicError::DimensionMismatch {
                    left: dimension,
                    right: p.dimension(),
                }
                .into());
            }
        }
        for i in 0..punctures.len() {
            for j in i + 1..punctures.len() {
                if punctures[i] == punctures[j] {
                    return Err(PlanarError::DuplicatePuncture(i, j));
                }
            }
        }
        Ok(Self { dimension, punctures })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn punctures(&self) -> &[BallPoint] {
        &self.punctures
    }
}

/// `s_D(z) ≤ σ⁻¹(min_p K_{Bⁿ}(z, p))` over the punctures `p`.
pub fn punctured_upper_bound(domain: &PuncturedDomainSpec, z: &BallPoint) -> Result<BoundCertificate, PlanarError> {
    let mut nearest: Option<(usize, HyperbolicValue)> = None;
    for (i, p) in domain.punctures.iter().enumerate() {
        if p == z {
            return Err(PlanarError::PunctureEvaluation);
        }
        let k = kobayashi_ball(z, p)?;
        if nearest.is_none_or(|(_, best)| k < best) {
            nearest = Some((i, k));
        }
    }
    let (value, nearest_index, distance) = match nearest {
        Some((i, k)) => (sigma_inv(k).value(), i as f64, k.value()),
        // no punctures: the ball itself, where s ≡ 1
        None => (1.0, -1.0, f64::INFINITY),
    };
    let mut cert = BoundCertificate::new(value, BoundTag::Upper, "punctured-kobayashi")?
        .with("dimension", domain.dimension as f64)
        .with("nearest_puncture", nearest_index);
    if distance.is_finite() {
        cert = cert.with("kobayashi_distance", distance);
    }
    Ok(cert)
}

/// Planar domains whose boundary distance is available in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlanarDomain {
    Disc,
    Annulus(AnnulusSpec),
    PuncturedDisc,
}

impl PlanarDomain {
    /// Euclidean distance to the boundary; an error if `z` is not in the domain.
    pub fn boundary_distance(&self, z: Complex64) -> Result<f64, PlanarError> {
        let m = z.norm();
        let delta = match self {
            PlanarDomain::Disc => 1.0 - m,
            PlanarDomain::Annulus(a) => a.boundary_distance(z),
            PlanarDomain::PuncturedDisc => (1.0 - m).min(m),
        };
        if delta > 0.0 {
            Ok(delta)
        } else if delta == 0.0 {
            Err(PlanarError::BoundaryPoint)
        } else {
            Err(PlanarError::PointNotInDomain(z))
        }
    }
}

/// Lower bound `s/(4δ(z))` on the Carathéodory norm of `∂/∂z` at `z`,
/// given a valid lower bound `s` for the squeezing function at `z`.
pub fn caratheodory_lower_estimate(domain: PlanarDomain, z: Complex64, s_lower: f64) -> Result<f64, PlanarError> {
    if !(s_lower > 0.0 && s_lower <= 1.0) {
        return Err(PlanarError::InvalidLowerBound(s_lower));
    }
    let delta = domain.boundary_distance(z)?;
    Ok(s_lower / (4.0 * delta))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompletenessReport {
    pub holds: bool,
    /// Smallest `bound(x) − C/log(1/δ(x))` over the sample.
    pub worst_margin: f64,
    pub worst_point: Option<Complex64>,
}

/// Checks `bound(x) > C / log(1/δ(x))` on every sample point (all with `δ < 1`).
pub fn completeness_criterion_check(
    domain: PlanarDomain,
    bound: impl Fn(Complex64) -> f64,
    c: f64,
    sample: &[Complex64],
) -> Result<CompletenessReport, PlanarError> {
    if !(c > 0.0) {
        return Err(PlanarError::NonPositiveConstant(c));
    }
    let mut report = CompletenessReport {
        holds: true,
        worst_margin: f64::INFINITY,
        worst_point: None,
    };
    for &x in sample {
        let delta = domain.boundary_distance(x)?;
        if delta >= 1.0 {
            return Err(PlanarError::SampleTooDeep(x, delta));
        }
        let margin = bound(x) - c / (1.0 / delta).ln();
        if margin < report.worst_margin {
            report.worst_margin = margin;
            report.worst_point = Some(x);
        }
        if !(margin > 0.0) {
            report.holds = false;
        }
    }
    Ok(report)
}

/// Domains with an exact squeezing function and a computable Kobayashi distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactDomain {
    /// `s ≡ 1`.
    Ball(usize),
    /// `s(z) = ‖z‖`; for `n ≥ 2` removing the origin leaves `K_{Bⁿ}` unchanged.
    PuncturedBall(usize),
}

impl ExactDomain {
    fn dimension(&self) -> usize {
        match *self {
            ExactDomain::Ball(n) | ExactDomain::PuncturedBall(n) => n,
        }
    }

    pub fn squeezing(&self, z: &BallPoint) -> Result<f64, PlanarError> {
        match self {
            ExactDomain::Ball(_) => Ok(1.0),
            ExactDomain::PuncturedBall(_) => {
                let n = z.norm();
                if n == 0.0 {
                    Err(PlanarError::PunctureEvaluation)
                } else {
                    Ok(n)
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzReport {
    pub holds: bool,
    /// Smallest `2T(x, y) + tol − |s(x) − s(y)|` over the pairs.
    pub worst_slack: f64,
    pub pairs: usize,
}

/// Checks `|s(x) − s(y)| ≤ 2·σ⁻¹(K(x, y))` (plus [`TOLERANCE`]) on every pair.
pub fn lipschitz_check(domain: ExactDomain, pairs: &[(BallPoint, BallPoint)]) -> Result<LipschitzReport, PlanarError> {
    let n = domain.dimension();
    if matches!(domain, ExactDomain::PuncturedBall(_)) && n < 2 {
        return Err(PlanarError::UnsupportedDomain(n));
    }
    let mut worst_slack = f64::INFINITY;
    for (x, y) in pairs {
        for p in [x, y] {
            if p.dimension() != n {
                return Err(HyperbolicError::DimensionMismatch {
                    left: n,
                    right: p.dimension(),
                }
                .into());
            }
        }
        let lhs = (domain.squeezing(x)? - domain.squeezing(y)?).abs();
        let t = metric_T(kobayashi_ball(x, y)?).value();
        worst_slack = worst_slack.min(2.0 * t + TOLERANCE - lhs);
    }
    Ok(LipschitzReport {
        holds: worst_slack >= 0.0,
        worst_slack,
        pairs: pairs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::{sigma, EuclideanRadius};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quarter() -> AnnulusSpec {
        AnnulusSpec::new(0.25).unwrap()
    }

    fn via_sigma(a: f64, b: f64) -> f64 {
        let s = |x| sigma(EuclideanRadius::new(x).unwrap()).value();
        sigma_inv(HyperbolicValue::new(s(a) - s(b)).unwrap()).value()
    }

    #[test]
    fn annulus_spec_validation() {
        assert!(AnnulusSpec::new(0.0).is_err());
        assert!(AnnulusSpec::new(1.0).is_err());
        assert!(AnnulusSpec::new(0.5).is_ok());
    }

    #[test]
    fn lower_bound_golden_value() {
        let cert = annulus_lower_bound(quarter(), c(0.5, 0.0)).unwrap();
        assert!((cert.value() - 2.0 / 7.0).abs() < TOLERANCE);
        assert_eq!(cert.tag(), BoundTag::Lower);
        assert!((cert.value() - annulus_minimum_closed_form(quarter())).abs() < TOLERANCE);
    }

    #[test]
    fn lower_bound_branches() {
        let a = quarter();
        let outer = annulus_lower_bound(a, c(0.0, 0.8)).unwrap();
        assert_eq!(outer.witness_text("branch"), Some("direct"));
        assert!((outer.value() - via_sigma(0.8, 0.25)).abs() < TOLERANCE);
        let inner = annulus_lower_bound(a, c(-0.3, 0.0)).unwrap();
        assert_eq!(inner.witness_text("branch"), Some("reflected"));
        assert!((inner.value() - via_sigma(0.25 / 0.3, 0.25)).abs() < TOLERANCE);
        // the unfolded expression is the max of both branches
        let direct = via_sigma(0.3, 0.25);
        assert!(inner.value() > direct);
    }

    #[test]
    fn lower_bound_tends_to_one() {
        let v = annulus_lower_bound(quarter(), c(1.0 - 1e-12, 0.0)).unwrap().value();
        assert!(v > 1.0 - 1e-11);
        let v = annulus_lower_bound(quarter(), c(0.25 + 1e-12, 0.0)).unwrap().value();
        assert!(v > 1.0 - 1e-10);
    }

    #[test]
    fn lower_bound_outside() {
        assert!(matches!(
            annulus_lower_bound(quarter(), c(0.2, 0.0)),
            Err(PlanarError::PointOutsideAnnulus { .. })
        ));
        assert!(annulus_lower_bound(quarter(), c(1.0, 0.0)).is_err());
        assert!(annulus_lower_bound(quarter(), c(0.25, 0.0)).is_err());
    }

    #[test]
    fn conjectured_value_examples() {
        let a = quarter();
        assert!((annulus_conjectured_value(a, 0.5).unwrap().value() - 2.0 / 7.0).abs() < TOLERANCE);
        assert!((annulus_conjectured_value(a, 0.9).unwrap().value() - 26.0 / 31.0).abs() < TOLERANCE);
        assert!(matches!(
            annulus_conjectured_value(a, 0.49),
            Err(PlanarError::OutOfFundamentalRange { .. })
        ));
        let cert = annulus_conjectured_value(a, 0.7).unwrap();
        assert_eq!(cert.tag(), BoundTag::Lower);
        assert_eq!(cert.method(), "annulus-conjecture");
    }

    #[test]
    fn c_constant_matches_brute_force_scan() {
        let (u, v, w) = (0.2, 0.3, 0.6);
        let got = c_constant(u, v, w).unwrap();
        let n = 1_000_000;
        let brute = (0..=n)
            .map(|i| {
                let r = u + (v - u) * i as f64 / n as f64;
                via_sigma((r / v).min(MAX_BELOW_ONE), r / w)
            })
            .fold(f64::INFINITY, f64::min);
        assert!(got > 0.0);
        assert!((got - brute).abs() < 1e-9, "{got} vs {brute}");
    }

    const MAX_BELOW_ONE: f64 = crate::hyperbolic::MAX_RADIUS;

    #[test]
    fn c_constant_errors_and_positivity() {
        assert!(matches!(
            c_constant(0.3, 0.2, 0.6),
            Err(PlanarError::ParameterOrderViolation { .. })
        ));
        assert!(c_constant(0.2, 0.3, 1.0).is_err());
        for &(u, v, w) in &[(0.01, 0.02, 0.03), (0.5, 0.9, 0.99), (0.1, 0.5, 0.500001)] {
            assert!(c_constant(u, v, w).unwrap() > 0.0);
        }
    }

    #[test]
    fn c_constant_near_collapsed_interval() {
        // u → v: a single evaluation at r = u
        let (v, w) = (0.3, 0.6);
        let u = v - 1e-9;
        let got = c_constant(u, v, w).unwrap();
        assert!((got - c_objective(u, v, w)).abs() < 1e-8);
    }

    #[test]
    fn circle_image_examples() {
        let (center, radius) = mobius_circle_image(DiscPoint::ORIGIN, 0.3);
        assert_eq!(center, c(0.0, 0.0));
        assert!((radius - 0.3).abs() < TOLERANCE);
        let a = DiscPoint::from_re_im(0.5, 0.0).unwrap();
        let (center, radius) = mobius_circle_image(a, 0.25);
        // real-axis diameter endpoints φ_a(±0.25)
        let p = mobius(a.z(), c(0.25, 0.0));
        let q = mobius(a.z(), c(-0.25, 0.0));
        assert!((center - (p + q) * 0.5).norm() < TOLERANCE);
        assert!((radius - (p - q).norm() * 0.5).abs() < TOLERANCE);
        assert!(center.norm() + radius < 1.0);
    }

    fn krantz(k: i32) -> ExcisedDiscDomainSpec {
        krantz_configuration(0.2, 0.255, 0.265, -k..=k, true).unwrap()
    }

    #[test]
    fn krantz_origin_is_far() {
        let d = krantz(3);
        let cert = excised_domain_lower_bound(&d, c(0.0, 0.0)).unwrap();
        assert_eq!(cert.witness_text("region"), Some("far"));
        assert!((cert.value() - hyperbolic_gap(0.26, 0.255)).abs() < TOLERANCE);
    }

    #[test]
    fn krantz_next_to_an_excision_is_near() {
        let d = krantz(3);
        let e = d.excisions()[3];
        // pullback modulus 0.255: outside the excised 1/4 disc, inside the (v+w)/2 = 0.26 one
        let z = (e.center.z() + c(0.255, 0.0)) / (c(1.0, 0.0) + e.center.z().conj() * 0.255);
        assert!(d.contains(z));
        let cert = excised_domain_lower_bound(&d, z).unwrap();
        assert_eq!(cert.witness_text("region"), Some("near"));
        assert!((cert.value() - c_constant(0.2, 0.26, 0.265).unwrap()).abs() < TOLERANCE);
    }

    #[test]
    fn krantz_with_identity_excludes_origin() {
        let d = krantz_configuration(0.2, 0.255, 0.265, -2..=2, false).unwrap();
        assert_eq!(
            excised_domain_lower_bound(&d, c(0.0, 0.0)),
            Err(PlanarError::PointNotInDomain(c(0.0, 0.0)))
        );
    }

    #[test]
    fn excised_validation() {
        let e = |x: f64, r: f64| Excision {
            center: DiscPoint::from_re_im(x, 0.0).unwrap(),
            radius: r,
        };
        assert!(matches!(
            ExcisedDiscDomainSpec::new(0.2, 0.3, 0.4, vec![e(0.0, 0.35)]),
            Err(PlanarError::ExcisionRadius { index: 0, .. })
        ));
        assert_eq!(
            ExcisedDiscDomainSpec::new(0.2, 0.3, 0.4, vec![e(0.0, 0.25), e(0.5, 0.25)]),
            Err(PlanarError::OverlappingExcisions(0, 1))
        );
        // Krantz spacing is too tight for w = 0.3
        assert!(krantz_configuration(0.2, 0.26, 0.3, -1..=1, false).is_err());
    }

    fn ball(coords: &[(f64, f64)]) -> BallPoint {
        BallPoint::new(coords.iter().map(|&(a, b)| c(a, b)).collect()).unwrap()
    }

    #[test]
    fn punctured_origin_matches_norm() {
        let d = PuncturedDomainSpec::new(2, vec![ball(&[(0.0, 0.0), (0.0, 0.0)])]).unwrap();
        let z = ball(&[(0.25, 0.0), (0.0, 0.0)]);
        let cert = punctured_upper_bound(&d, &z).unwrap();
        assert!((cert.value() - 0.25).abs() < TOLERANCE);
        assert_eq!(cert.tag(), BoundTag::Upper);
    }

    #[test]
    fn punctured_two_points() {
        let p0 = ball(&[(0.0, 0.0), (0.0, 0.0)]);
        let p1 = ball(&[(0.5, 0.0), (0.0, 0.0)]);
        let z = ball(&[(0.25, 0.0), (0.0, 0.0)]);
        let d = PuncturedDomainSpec::new(2, vec![p0.clone(), p1.clone()]).unwrap();
        let expected = sigma_inv(kobayashi_ball(&z, &p0).unwrap().min_with(kobayashi_ball(&z, &p1).unwrap())).value();
        // |φ(z)| towards (0.5, 0) is 0.25/0.875 > 0.25, so the origin is nearer
        assert!((expected - 0.25).abs() < TOLERANCE);
        assert!((punctured_upper_bound(&d, &z).unwrap().value() - expected).abs() < TOLERANCE);
        let z = ball(&[(0.4, 0.0), (0.0, 0.0)]);
        let v = punctured_upper_bound(&d, &z).unwrap().value();
        assert!((v - 0.1 / 0.8).abs() < TOLERANCE);
    }

    trait MinWith {
        fn min_with(self, other: Self) -> Self;
    }

    impl MinWith for HyperbolicValue {
        fn min_with(self, other: Self) -> Self {
            if other < self {
                other
            } else {
                self
            }
        }
    }

    #[test]
    fn punctured_errors_and_limit() {
        let p = ball(&[(0.1, 0.2), (0.0, -0.3)]);
        let d = PuncturedDomainSpec::new(2, vec![p.clone()]).unwrap();
        assert_eq!(punctured_upper_bound(&d, &p), Err(PlanarError::PunctureEvaluation));
        let close = ball(&[(0.1 + 1e-9, 0.2), (0.0, -0.3)]);
        assert!(punctured_upper_bound(&d, &close).unwrap().value() < 1e-8);
        assert!(matches!(
            PuncturedDomainSpec::new(2, vec![p.clone(), p.clone()]),
            Err(PlanarError::DuplicatePuncture(0, 1))
        ));
        assert!(PuncturedDomainSpec::new(3, vec![p]).is_err());
    }

    #[test]
    fn caratheodory_examples() {
        assert!((caratheodory_lower_estimate(PlanarDomain::Disc, c(0.0, 0.0), 1.0).unwrap() - 0.25).abs() < TOLERANCE);
        let v = caratheodory_lower_estimate(PlanarDomain::Annulus(quarter()), c(0.5, 0.0), 2.0 / 7.0).unwrap();
        assert!((v - 2.0 / 7.0).abs() < TOLERANCE);
        let near = caratheodory_lower_estimate(PlanarDomain::Disc, c(1.0 - 1e-9, 0.0), 0.5).unwrap();
        assert!(near > 1e8);
        assert_eq!(
            caratheodory_lower_estimate(PlanarDomain::Disc, c(1.0, 0.0), 0.5),
            Err(PlanarError::BoundaryPoint)
        );
        assert!(caratheodory_lower_estimate(PlanarDomain::Disc, c(0.1, 0.0), 0.0).is_err());
    }

    #[test]
    fn completeness_rejects_nonpositive_constant() {
        let d = PlanarDomain::Annulus(quarter());
        assert_eq!(
            completeness_criterion_check(d, |_| 1.0, 0.0, &[c(0.5, 0.0)]),
            Err(PlanarError::NonPositiveConstant(0.0))
        );
    }

    #[test]
    fn completeness_fails_for_punctured_disc() {
        let pts: Vec<_> = (1..=20).map(|k| c(10f64.powi(-k), 0.0)).collect();
        let report = completeness_criterion_check(PlanarDomain::PuncturedDisc, |z| z.norm(), 0.01, &pts).unwrap();
        assert!(!report.holds);
        assert!(report.worst_margin < 0.0);
    }

    #[test]
    fn lipschitz_trivial_cases() {
        let x = ball(&[(0.3, 0.1), (0.2, -0.4)]);
        let y = ball(&[(-0.5, 0.0), (0.1, 0.1)]);
        let r = lipschitz_check(ExactDomain::Ball(2), &[(x.clone(), y.clone())]).unwrap();
        assert!(r.holds);
        let r = lipschitz_check(ExactDomain::PuncturedBall(2), &[(x.clone(), x.clone())]).unwrap();
        assert!(r.holds);
        assert!((r.worst_slack - TOLERANCE).abs() < 1e-15);
        assert_eq!(
            lipschitz_check(ExactDomain::PuncturedBall(1), &[]),
            Err(PlanarError::UnsupportedDomain(1))
        );
    }
}
