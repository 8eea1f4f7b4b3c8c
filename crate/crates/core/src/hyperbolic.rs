//! Scalar hyperbolic geometry on the unit disc and the unit ball.
//!
//! The central pair is the hyperbolic radius map
//!
//! ```text
//! σ(r)   = log((1 + r) / (1 - r)) = 2·atanh(r),   0 ≤ r < 1
//! σ⁻¹(w) = tanh(w / 2),                           w ≥ 0
//! ```
//!
//! `σ(|z|)` is the Poincaré (= Kobayashi = Carathéodory) distance from the
//! origin to `z` on the disc and on the ball. Distances between arbitrary
//! points are obtained by transporting one of them to the origin with an
//! automorphism.
//!
//! Near the boundary σ is evaluated through `atanh`/`ln_1p` and the
//! automorphism identity
//!
//! ```text
//! 1 - |φ_a(z)|² = (1 - |a|²)(1 - |z|²) / |1 - ⟨z, a⟩|²
//! ```
//!
//! so that `1 - |φ_a(z)|` never suffers cancellation. The largest radius that
//! is representable is [`MAX_RADIUS`] = 1 − 2⁻⁵³, where σ ≈ 37.43.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Module-wide comparison tolerance for double-precision identities.
pub const TOLERANCE: f64 = 1e-12;

/// Largest `f64` strictly below one; σ is finite here (≈ 37.43).
pub const MAX_RADIUS: f64 = 1.0 - f64::EPSILON / 2.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HyperbolicError {
    #[error("radius {0} is outside [0, 1)")]
    RadiusOutOfRange(f64),
    #[error("hyperbolic value {0} must be finite and nonnegative")]
    InvalidDistance(f64),
    #[error("point with modulus {0} is not inside the unit disc")]
    OutsideDisc(f64),
    #[error("point with norm {0} is not inside the unit ball")]
    OutsideBall(f64),
    #[error("ball points need at least one coordinate")]
    ZeroDimension,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// A Euclidean radius in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct EuclideanRadius(f64);

impl EuclideanRadius {
    pub fn new(value: f64) -> Result<Self, HyperbolicError> {
        if (0.0..1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(HyperbolicError::RadiusOutOfRange(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// A nonnegative, finite hyperbolic distance or radius.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct HyperbolicValue(f64);

impl HyperbolicValue {
    pub fn new(value: f64) -> Result<Self, HyperbolicError> {
        if value.is_finite() && value >= 0.0 {
            Ok(Self(value))
        } else {
            Err(HyperbolicError::InvalidDistance(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl std::ops::Add for HyperbolicValue {
    type Output = HyperbolicValue;

    fn add(self, rhs: Self) -> Self::Output {
        HyperbolicValue(self.0 + rhs.0)
    }
}

/// A point of the open unit disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscPoint(Complex64);

impl DiscPoint {
    pub const ORIGIN: DiscPoint = DiscPoint(Complex64::new(0.0, 0.0));

    pub fn new(z: Complex64) -> Result<Self, HyperbolicError> {
        let m = z.norm();
        if m < 1.0 {
            Ok(Self(z))
        } else {
            Err(HyperbolicError::OutsideDisc(m))
        }
    }

    pub fn from_re_im(re: f64, im: f64) -> Result<Self, HyperbolicError> {
        Self::new(Complex64::new(re, im))
    }

    pub fn z(self) -> Complex64 {
        self.0
    }

    pub fn modulus(self) -> f64 {
        self.0.norm()
    }
}

/// A point of the open unit ball in ℂⁿ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallPoint(Vec<Complex64>);

impl BallPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self, HyperbolicError> {
        if coords.is_empty() {
            return Err(HyperbolicError::ZeroDimension);
        }
        let norm = vector_norm(&coords);
        if norm < 1.0 {
            Ok(Self(coords))
        } else {
            Err(HyperbolicError::OutsideBall(norm))
        }
    }

    pub fn origin(dimension: usize) -> Result<Self, HyperbolicError> {
        Self::new(vec![Complex64::new(0.0, 0.0); dimension])
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        vector_norm(&self.0)
    }
}

fn vector_norm(v: &[Complex64]) -> f64 {
    // hypot-style accumulation keeps tiny and large coordinates exact enough
    v.iter().fold(0.0_f64, |acc, c| acc.hypot(c.norm()))
}

/// ⟨z, a⟩ = Σ z_j · conj(a_j)
fn inner(z: &[Complex64], a: &[Complex64]) -> Complex64 {
    z.iter().zip(a).map(|(x, y)| x * y.conj()).sum()
}

/// σ(r) = log((1+r)/(1−r)).
pub fn sigma(r: EuclideanRadius) -> HyperbolicValue {
    HyperbolicValue(2.0 * r.0.atanh())
}

/// σ⁻¹(w) = tanh(w/2). Saturates at [`MAX_RADIUS`] once `tanh` rounds to one.
pub fn sigma_inv(w: HyperbolicValue) -> EuclideanRadius {
    EuclideanRadius((0.5 * w.0).tanh().min(MAX_RADIUS))
}

/// The metric `T = σ⁻¹ ∘ K` applied to a precomputed distance.
#[allow(non_snake_case)]
pub fn metric_T(k: HyperbolicValue) -> EuclideanRadius {
    sigma_inv(k)
}

/// `σ⁻¹(σ(outer) − σ(inner))` for `0 ≤ inner ≤ outer ≤ 1`.
///
/// Expanding the logarithms gives the algebraic form
/// `(outer − inner) / (1 − outer·inner)`, which stays exact at `outer = 1`
/// (value one) where σ itself diverges.
pub fn hyperbolic_gap(outer: f64, inner: f64) -> f64 {
    debug_assert!(inner <= outer);
    (outer - inner) / (1.0 - outer * inner)
}

/// σ(ρ) given both ρ and an accurately computed `1 − ρ²`.
fn sigma_with_complement(rho: f64, one_minus_sq: f64) -> f64 {
    if rho < 0.5 {
        2.0 * rho.atanh()
    } else {
        // σ(ρ) = log((1+ρ)² / (1−ρ²))
        (2.0 * rho.ln_1p() - one_minus_sq.ln()).max(0.0)
    }
}

/// The disc automorphism `(z − a)/(1 − conj(a)·z)`, which sends `a` to zero.
/// Its inverse is `disc_mobius(−a, ·)`.
pub fn disc_mobius(a: DiscPoint, z: DiscPoint) -> DiscPoint {
    DiscPoint(mobius(a.0, z.0))
}

/// Unchecked `(z − a)/(1 − conj(a)·z)`; callers guarantee `|a| < 1`.
pub(crate) fn mobius(a: Complex64, z: Complex64) -> Complex64 {
    (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
}

/// Poincaré distance on the unit disc, normalised so that the distance from
/// the origin to `z` is `σ(|z|)`.
pub fn poincare_disc(a: DiscPoint, b: DiscPoint) -> HyperbolicValue {
    HyperbolicValue(poincare_raw(a.0, b.0))
}

pub(crate) fn poincare_raw(a: Complex64, b: Complex64) -> f64 {
    if a == b {
        return 0.0;
    }
    let denom = Complex64::new(1.0, 0.0) - b.conj() * a;
    let rho = ((a - b).norm() / denom.norm()).min(MAX_RADIUS);
    let one_minus_sq = one_minus_sq(a.norm()) * one_minus_sq(b.norm()) / denom.norm_sqr();
    sigma_with_complement(rho, one_minus_sq)
}

fn one_minus_sq(m: f64) -> f64 {
    (1.0 - m) * (1.0 + m)
}

/// The involutive automorphism of the ball sending `a` to `0`:
///
/// ```text
/// φ_a(z) = (a − P_a z − s_a Q_a z) / (1 − ⟨z, a⟩)
/// ```
///
/// with `P_a` the orthogonal projection onto `ℂa`, `Q_a = I − P_a` and
/// `s_a = √(1 − ‖a‖²)`. In dimension one this is `−(z − a)/(1 − āz)`.
pub fn ball_automorphism(a: &BallPoint, z: &BallPoint) -> Result<Vec<Complex64>, HyperbolicError> {
    check_dims(a, z)?;
    let a = &a.0;
    let z = &z.0;
    let aa = inner(a, a).re;
    let za = inner(z, a);
    let s = one_minus_sq(aa.sqrt()).sqrt();
    let denom = Complex64::new(1.0, 0.0) - za;
    let image = if aa == 0.0 {
        z.iter().map(|zj| -zj).collect()
    } else {
        let scale = za / aa;
        a.iter()
            .zip(z)
            .map(|(aj, zj)| {
                let p = aj * scale;
                let q = zj - p;
                (aj - p - q * s) / denom
            })
            .collect()
    };
    Ok(image)
}

fn check_dims(a: &BallPoint, b: &BallPoint) -> Result<(), HyperbolicError> {
    if a.dimension() != b.dimension() {
        return Err(HyperbolicError::DimensionMismatch {
            left: a.dimension(),
            right: b.dimension(),
        });
    }
    Ok(())
}

/// Kobayashi distance on the unit ball: `σ(‖φ_a(b)‖)`.
pub fn kobayashi_ball(a: &BallPoint, b: &BallPoint) -> Result<HyperbolicValue, HyperbolicError> {
    let image = ball_automorphism(a, b)?;
    let rho = vector_norm(&image).min(MAX_RADIUS);
    if rho == 0.0 {
        return Ok(HyperbolicValue(0.0));
    }
    let denom = (Complex64::new(1.0, 0.0) - inner(&b.0, &a.0)).norm_sqr();
    let one_minus = one_minus_sq(a.norm()) * one_minus_sq(b.norm()) / denom;
    Ok(HyperbolicValue(sigma_with_complement(rho, one_minus)))
}
