//! The four classical bounded symmetric domains.
//!
//! ```text
//! D_I(r, s)  = { Z ∈ ℂ^{r×s}           : I − Z Z* > 0 }   (r ≤ s)
//! D_II(p)    = { Z = Zᵀ ∈ ℂ^{p×p}      : I − Z Z* > 0 }
//! D_III(q)   = { Z = −Zᵀ ∈ ℂ^{q×q}     : I − Z Z* > 0 }
//! D_IV(n)    = { z ∈ ℂⁿ : 1 + |z·z|² − 2‖z‖² > 0, |z·z| < 1 }
//! ```
//!
//! with `z·z = Σ z_j²`. These are homogeneous, so the squeezing function is a
//! constant `s(D)`; the constants and the product rule
//! `s(D₁ × … × D_m) = (Σ s(D_i)⁻²)^{-1/2}` are provided exactly. Since each
//! `s(D)⁻²` is an integer (`r`, `p`, `⌊q/2⌋`, `2`) products are computed from
//! those integers rather than from rounded square roots.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::{BoundCertificate, BoundTag, CertificateRangeError};
use crate::hyperbolic::BallPoint;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymmetricError {
    #[error("invalid parameters for {0}")]
    InvalidParameters(String),
    #[error("point shape does not match {expected}: {detail}")]
    ShapeMismatch { expected: String, detail: String },
    #[error("product of an empty list of domains")]
    EmptyList,
    #[error("the origin is not a point of the punctured ball")]
    PunctureEvaluation,
    #[error("sandwich check needs 1 ≤ r ≤ s and r·s ≤ 16 (got {r}, {s})")]
    SandwichScale { r: usize, s: usize },
    #[error(transparent)]
    Certificate(#[from] CertificateRangeError),
}

/// A classical bounded symmetric domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassicalDomainSpec {
    TypeI { r: usize, s: usize },
    TypeII { p: usize },
    TypeIII { q: usize },
    TypeIV { n: usize },
}

impl fmt::Display for ClassicalDomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassicalDomainSpec::TypeI { r, s } => write!(f, "typeI:{r},{s}"),
            ClassicalDomainSpec::TypeII { p } => write!(f, "typeII:{p}"),
            ClassicalDomainSpec::TypeIII { q } => write!(f, "typeIII:{q}"),
            ClassicalDomainSpec::TypeIV { n } => write!(f, "typeIV:{n}"),
        }
    }
}

impl ClassicalDomainSpec {
    pub fn type_i(r: usize, s: usize) -> Result<Self, SymmetricError> {
        Self::TypeI { r, s }.validated()
    }

    pub fn type_ii(p: usize) -> Result<Self, SymmetricError> {
        Self::TypeII { p }.validated()
    }

    pub fn type_iii(q: usize) -> Result<Self, SymmetricError> {
        Self::TypeIII { q }.validated()
    }

    pub fn type_iv(n: usize) -> Result<Self, SymmetricError> {
        Self::TypeIV { n }.validated()
    }

    /// Type III needs `q ≥ 2` (q = 1 is a point); Type IV needs `n ≥ 2`
    /// (n = 1 is the disc, whose constant is 1, not 2^{-1/2}).
    pub fn validated(self) -> Result<Self, SymmetricError> {
        let ok = match self {
            ClassicalDomainSpec::TypeI { r, s } => r >= 1 && r <= s,
            ClassicalDomainSpec::TypeII { p } => p >= 1,
            ClassicalDomainSpec::TypeIII { q } => q >= 2,
            ClassicalDomainSpec::TypeIV { n } => n >= 2,
        };
        if ok {
            Ok(self)
        } else {
            Err(SymmetricError::InvalidParameters(self.to_string()))
        }
    }

    pub fn complex_dimension(&self) -> usize {
        match *self {
            ClassicalDomainSpec::TypeI { r, s } => r * s,
            ClassicalDomainSpec::TypeII { p } => p * (p + 1) / 2,
            ClassicalDomainSpec::TypeIII { q } => q * (q - 1) / 2,
            ClassicalDomainSpec::TypeIV { n } => n,
        }
    }

    /// `s(D)⁻²`, an integer for every classical domain.
    pub fn inverse_square(&self) -> usize {
        match *self {
            ClassicalDomainSpec::TypeI { r, .. } => r,
            ClassicalDomainSpec::TypeII { p } => p,
            ClassicalDomainSpec::TypeIII { q } => q / 2,
            ClassicalDomainSpec::TypeIV { .. } => 2,
        }
    }

    fn matrix_shape(&self) -> Option<(usize, usize)> {
        match *self {
            ClassicalDomainSpec::TypeI { r, s } => Some((r, s)),
            ClassicalDomainSpec::TypeII { p } => Some((p, p)),
            ClassicalDomainSpec::TypeIII { q } => Some((q, q)),
            ClassicalDomainSpec::TypeIV { .. } => None,
        }
    }
}

/// A point of a classical domain: a matrix for Types I–III, a vector for Type IV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixPoint {
    spec: ClassicalDomainSpec,
    rows: usize,
    cols: usize,
    /// Row-major entries (Types I–III) or coordinates (Type IV).
    entries: Vec<Complex64>,
}

impl MatrixPoint {
    /// Builds a point from a full row-major matrix (or the vector for Type IV),
    /// checking shape and exact (skew-)symmetry.
    pub fn new(spec: ClassicalDomainSpec, entries: Vec<Complex64>) -> Result<Self, SymmetricError> {
        let spec = spec.validated()?;
        let mismatch = |detail: String| SymmetricError::ShapeMismatch {
            expected: spec.to_string(),
            detail,
        };
        let (rows, cols) = spec.matrix_shape().unwrap_or((1, entries.len()));
        if entries.len() != rows * cols || (spec.matrix_shape().is_none() && cols != spec.complex_dimension()) {
            return Err(mismatch(format!("{} entries", entries.len())));
        }
        let at = |i: usize, j: usize| entries[i * cols + j];
        match spec {
            ClassicalDomainSpec::TypeII { p } => {
                for i in 0..p {
                    for j in i + 1..p {
                        if at(i, j) != at(j, i) {
                            return Err(mismatch(format!("entry ({i},{j}) breaks symmetry")));
                        }
                    }
                }
            }
            ClassicalDomainSpec::TypeIII { q } => {
                for i in 0..q {
                    for j in i..q {
                        if at(i, j) != -at(j, i) {
                            return Err(mismatch(format!("entry ({i},{j}) breaks skew-symmetry")));
                        }
                    }
                }
            }
            _ => {}
        }
        Ok(Self {
            spec,
            rows,
            cols,
            entries,
        })
    }

    /// Builds a point from its `complex_dimension()` free coordinates:
    /// all entries (Type I), the upper triangle with diagonal (Type II),
    /// the strict upper triangle (Type III) or the vector (Type IV).
    pub fn from_coordinates(spec: ClassicalDomainSpec, coords: &[Complex64]) -> Result<Self, SymmetricError> {
        let spec = spec.validated()?;
        if coords.len() != spec.complex_dimension() {
            return Err(SymmetricError::ShapeMismatch {
                expected: spec.to_string(),
                detail: format!("{} coordinates", coords.len()),
            });
        }
        let entries = match spec {
            ClassicalDomainSpec::TypeI { .. } | ClassicalDomainSpec::TypeIV { .. } => coords.to_vec(),
            ClassicalDomainSpec::TypeII { p } => {
                let mut m = vec![Complex64::new(0.0, 0.0); p * p];
                let mut it = coords.iter();
                for i in 0..p {
                    for j in i..p {
                        let v = *it.next().expect("length checked");
                        m[i * p + j] = v;
                        m[j * p + i] = v;
                    }
                }
                m
            }
            ClassicalDomainSpec::TypeIII { q } => {
                let mut m = vec![Complex64::new(0.0, 0.0); q * q];
                let mut it = coords.iter();
                for i in 0..q {
                    for j in i + 1..q {
                        let v = *it.next().expect("length checked");
                        m[i * q + j] = v;
                        m[j * q + i] = -v;
                    }
                }
                m
            }
        };
        Self::new(spec, entries)
    }

    pub fn zero(spec: ClassicalDomainSpec) -> Result<Self, SymmetricError> {
        Self::from_coordinates(spec, &vec![Complex64::new(0.0, 0.0); spec.complex_dimension()])
    }

    pub fn spec(&self) -> ClassicalDomainSpec {
        self.spec
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z * t).collect(),
            ..self.clone()
        }
    }

    /// Frobenius norm of the entries.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `I − Z Z*` as a dense row-major `rows × rows` Hermitian matrix.
    fn defect_matrix(&self) -> Vec<Complex64> {
        let (r, c) = (self.rows, self.cols);
        let mut h = vec![Complex64::new(0.0, 0.0); r * r];
        for i in 0..r {
            for j in 0..r {
                let zz: Complex64 = (0..c)
                    .map(|k| self.entries[i * c + k] * self.entries[j * c + k].conj())
                    .sum();
                let id = if i == j { 1.0 } else { 0.0 };
                h[i * r + j] = Complex64::new(id, 0.0) - zz;
            }
        }
        h
    }
}

/// Cholesky test for a Hermitian matrix; false on the first pivot ≤ 0.
///
/// Pivots in `(−1e−12, 0]` therefore classify as not positive definite.
pub fn is_positive_definite(h: &[Complex64], n: usize) -> bool {
    let mut l = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        let d = h[j * n + j].re - (0..j).map(|k| l[j * n + k].norm_sqr()).sum::<f64>();
        if !(d > 0.0) {
            return false;
        }
        let ljj = d.sqrt();
        l[j * n + j] = Complex64::new(ljj, 0.0);
        for i in j + 1..n {
            let s: Complex64 = (0..j).map(|k| l[i * n + k] * l[j * n + k].conj()).sum();
            l[i * n + j] = (h[i * n + j] - s) / ljj;
        }
    }
    true
}

/// Membership of `point` in the domain `spec`.
pub fn contains(spec: ClassicalDomainSpec, point: &MatrixPoint) -> Result<bool, SymmetricError> {
    if point.spec != spec {
        return Err(SymmetricError::ShapeMismatch {
            expected: spec.to_string(),
            detail: format!("point built for {}", point.spec),
        });
    }
    Ok(match spec {
        ClassicalDomainSpec::TypeIV { .. } => {
            let q: Complex64 = point.entries.iter().map(|z| z * z).sum();
            let norm_sq: f64 = point.entries.iter().map(|z| z.norm_sqr()).sum();
            let qm = q.norm();
            1.0 + qm * qm - 2.0 * norm_sq > 0.0 && 1.0 - qm > 0.0
        }
        _ => is_positive_definite(&point.defect_matrix(), point.rows),
    })
}

/// The exact squeezing constant of a classical domain.
pub fn kubota_constant(spec: ClassicalDomainSpec) -> Result<BoundCertificate, SymmetricError> {
    let spec = spec.validated()?;
    let k = spec.inverse_square();
    Ok(BoundCertificate::new((1.0 / k as f64).sqrt(), BoundTag::Exact, "kubota-constant")?
        .with("domain", spec.to_string())
        .with("inverse_square", k as f64))
}

/// `s(D₁ × … × D_m) = (Σ s(D_i)⁻²)^{-1/2}`.
pub fn product_constant(specs: &[ClassicalDomainSpec]) -> Result<BoundCertificate, SymmetricError> {
    if specs.is_empty() {
        return Err(SymmetricError::EmptyList);
    }
    let mut total = 0usize;
    let mut names = Vec::with_capacity(specs.len());
    for spec in specs {
        let spec = spec.validated()?;
        total += spec.inverse_square();
        names.push(spec.to_string());
    }
    Ok(BoundCertificate::new((1.0 / total as f64).sqrt(), BoundTag::Exact, "kubota-product")?
        .with("domain", names.join("+"))
        .with("inverse_square", total as f64))
}

/// `s_{Bⁿ∖{0}}(z) = ‖z‖`.
pub fn punctured_ball_squeezing(z: &BallPoint) -> Result<BoundCertificate, SymmetricError> {
    let norm = z.norm();
    if norm == 0.0 {
        return Err(SymmetricError::PunctureEvaluation);
    }
    Ok(BoundCertificate::new(norm, BoundTag::Exact, "punctured-ball-norm")?.with("dimension", z.dimension() as f64))
}

/// Outcome of sampling `B^{rs} ⊂ D_I(r, s) ⊂ √r·B^{rs}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SandwichReport {
    pub r: usize,
    pub s: usize,
    /// Unit-ball samples that landed outside `D_I(r, s)`.
    pub inner_failures: usize,
    /// `D_I(r, s)` samples with Frobenius norm `≥ √r`.
    pub outer_failures: usize,
    pub inner_samples: usize,
    pub outer_samples: usize,
    /// Largest Frobenius norm seen among accepted domain samples, over `√r`.
    pub max_outer_ratio: f64,
    /// `r^{-1/2}` as implied by the extremal map `Z ↦ Z/√r`.
    pub implied_bound: f64,
    /// Whether `implied_bound` equals the Kubota constant.
    pub matches_kubota: bool,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.inner_failures == 0 && self.outer_failures == 0 && self.matches_kubota
    }
}

fn gaussian_direction(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Samples both inclusions of `B^{rs} ⊂ D_I(r, s) ⊂ √r·B^{rs}`.
///
/// Inner: uniform points of the unit ball (reshaped to `r × s`) must pass
/// [`contains`]. Outer: points are proposed along random directions at radii
/// up to `1.25·√r` and rejected unless [`contains`] accepts them; every
/// accepted one must have norm below `√r`.
pub fn sandwich_check_type_i(r: usize, s: usize, samples: usize, seed: u64) -> Result<SandwichReport, SymmetricError> {
    if r == 0 || r > s || r * s > 16 {
        return Err(SymmetricError::SandwichScale { r, s });
    }
    let spec = ClassicalDomainSpec::type_i(r, s)?;
    let dim = r * s;
    let sqrt_r = (r as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut inner_failures = 0;
    for _ in 0..samples {
        let dir = gaussian_direction(&mut rng, dim);
        let u: f64 = rng.random();
        let radius = u.powf(1.0 / (2 * dim) as f64) * (1.0 - 1e-12);
        let coords: Vec<_> = dir.iter().map(|z| z * radius).collect();
        if !contains(spec, &MatrixPoint::from_coordinates(spec, &coords)?)? {
            inner_failures += 1;
        }
    }

    let mut outer_failures = 0;
    let mut accepted = 0;
    let mut max_ratio = 0.0_f64;
    let mut attempts = 0usize;
    while accepted < samples && attempts < 1000 * samples.max(1) {
        attempts += 1;
        let dir = gaussian_direction(&mut rng, dim);
        let u: f64 = rng.random();
        let radius = 1.25 * sqrt_r * u;
        let coords: Vec<_> = dir.iter().map(|z| z * radius).collect();
        let point = MatrixPoint::from_coordinates(spec, &coords)?;
        if contains(spec, &point)? {
            accepted += 1;
            let ratio = point.frobenius_norm() / sqrt_r;
            max_ratio = max_ratio.max(ratio);
            if ratio >= 1.0 {
                outer_failures += 1;
            }
        }
    }

    let implied_bound = 1.0 / sqrt_r;
    let kubota = kubota_constant(spec)?.value();
    Ok(SandwichReport {
        r,
        s,
        inner_failures,
        outer_failures,
        inner_samples: samples,
        outer_samples: accepted,
        max_outer_ratio: max_ratio,
        implied_bound,
        matches_kubota: (implied_bound - kubota).abs() <= 1e-15,
    })
}
