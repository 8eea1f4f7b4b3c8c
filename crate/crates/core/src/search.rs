//! Numerical search for good embeddings of an annulus into the disc.
//!
//! For a univalent `L: A_r → Δ` put `f = φ_{L(p)} ∘ L`, so `f(p) = 0`. The
//! largest disc about the origin inside `f(A_r)` has radius
//! `min_{z ∈ ∂A_r} |f(z)| = σ⁻¹(min_z P(L(p), L(z)))`, a lower bound for the
//! squeezing function at `p`. Post-composing `L` with a further disc
//! automorphism does not change this number, so the centering automorphism
//! is always `φ_{L(p)}`.
//!
//! Tier A evaluates the inclusion `z ↦ z` and the reflection `z ↦ r/z`.
//! Tier B runs a multi-start Nelder–Mead search over Laurent polynomials
//! `Σ_{|k| ≤ m} c_k z^k`, certifying univalence with
//! [`injectivity_certificate`] before any candidate is accepted. The search
//! does not restrict to maps sending the outer circle to the unit circle.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hyperbolic::{poincare_raw, sigma_inv, HyperbolicValue};
use crate::planar::{annulus_conjectured_value, AnnulusSpec, PlanarError};
use crate::rouche::{injectivity_certificate, CertificateStatus, HolomorphicMap, RoucheError};

pub const MAX_DEGREE: usize = 4;
pub const DEFAULT_BOUNDARY_SAMPLES: usize = 2048;
pub const DEFAULT_BUDGET: usize = 500;
pub const DEFAULT_CERTIFICATE_GRID: usize = 16;
/// Boundary images at least this close to the unit circle lie on it.
pub const UNIT_CIRCLE_SLACK: f64 = 1e-12;
/// Improvement over the incumbent that triggers certification.
pub const IMPROVEMENT_THRESHOLD: f64 = 1e-6;
/// Largest tolerated change between `N` and `2N` boundary samples.
pub const RESAMPLING_TOLERANCE: f64 = 1e-6;

const SIMPLEX_STEP: f64 = 0.05;
const START_PERTURBATION: f64 = 0.05;
const START_MARGIN: f64 = 1e-3;
const MAX_STARTS: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("Laurent degree {0} exceeds {MAX_DEGREE}")]
    InvalidDegree(usize),
    #[error("search budget must be at least 1")]
    InvalidBudget,
    #[error("boundary sample count must be at least 8 (got {0})")]
    InvalidSamples(usize),
    #[error("monotonicity grid must have at least 8 points (got {0})")]
    InvalidGrid(usize),
    #[error("candidate is not certified injective")]
    NotCertified,
    #[error("candidate image leaves the disc (max modulus {max_modulus})")]
    ImageEscapesDisc { max_modulus: f64 },
    #[error(transparent)]
    Planar(#[from] PlanarError),
    #[error(transparent)]
    Rouche(#[from] RoucheError),
}

/// `Σ_{k=−m}^{m} c_k z^k`, stored as `[c_{−m}, …, c_m]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentPolynomial {
    degree: usize,
    coefficients: Vec<Complex64>,
}

impl LaurentPolynomial {
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self, SearchError> {
        if coefficients.len().is_multiple_of(2) {
            return Err(SearchError::InvalidDegree(coefficients.len() / 2));
        }
        let degree = coefficients.len() / 2;
        if degree > MAX_DEGREE {
            return Err(SearchError::InvalidDegree(degree));
        }
        Ok(Self { degree, coefficients })
    }

    /// The polynomial of the given degree with a single nonzero coefficient.
    pub fn monomial(degree: usize, power: i32, coefficient: Complex64) -> Result<Self, SearchError> {
        if degree > MAX_DEGREE || power.unsigned_abs() as usize > degree {
            return Err(SearchError::InvalidDegree(degree.max(power.unsigned_abs() as usize)));
        }
        let mut coefficients = vec![Complex64::new(0.0, 0.0); 2 * degree + 1];
        coefficients[(power + degree as i32) as usize] = coefficient;
        Ok(Self { degree, coefficients })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    fn from_reals(degree: usize, x: &[f64]) -> Self {
        Self {
            degree,
            coefficients: x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect(),
        }
    }

    fn to_reals(&self) -> Vec<f64> {
        self.coefficients.iter().flat_map(|c| [c.re, c.im]).collect()
    }

    fn scaled(&self, t: f64) -> Self {
        Self {
            degree: self.degree,
            coefficients: self.coefficients.iter().map(|c| c * t).collect(),
        }
    }
}

impl HolomorphicMap for LaurentPolynomial {
    fn eval(&self, z: Complex64) -> Complex64 {
        // z^{−m} · Σ_j c_{j−m} z^j by Horner
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coefficients.iter().rev() {
            acc = acc * z + c;
        }
        acc * z.powi(-(self.degree as i32))
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        // z^{−m−1} · Σ_j (j − m) c_{j−m} z^j
        let m = self.degree as i32;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in self.coefficients.iter().enumerate().rev() {
            acc = acc * z + c * (j as i32 - m) as f64;
        }
        acc * z.powi(-m - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EmbeddingFamily {
    MobiusInclusion,
    MobiusReflection,
    LaurentFamily,
}

/// A candidate embedding `L` together with its centering point `a = L(p)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingCandidate {
    pub family: EmbeddingFamily,
    pub map: LaurentPolynomial,
    pub centering: Complex64,
    pub certificate: CertificateStatus,
}

impl EmbeddingCandidate {
    /// `z ↦ z`; injective by construction.
    pub fn mobius_inclusion(p: Complex64) -> Self {
        let map = LaurentPolynomial::monomial(1, 1, Complex64::new(1.0, 0.0)).expect("degree 1");
        Self {
            family: EmbeddingFamily::MobiusInclusion,
            centering: map.eval(p),
            map,
            certificate: CertificateStatus::Certified,
        }
    }

    /// `z ↦ r/z`; injective by construction.
    pub fn mobius_reflection(annulus: AnnulusSpec, p: Complex64) -> Self {
        let map = LaurentPolynomial::monomial(1, -1, Complex64::new(annulus.inner_radius(), 0.0)).expect("degree 1");
        Self {
            family: EmbeddingFamily::MobiusReflection,
            centering: map.eval(p),
            map,
            certificate: CertificateStatus::Certified,
        }
    }

    /// A Laurent candidate awaiting certification.
    pub fn laurent(map: LaurentPolynomial, p: Complex64) -> Self {
        Self {
            family: EmbeddingFamily::LaurentFamily,
            centering: map.eval(p),
            map,
            certificate: CertificateStatus::Inconclusive,
        }
    }

    /// Runs the injectivity certificate; Möbius families are left as they are.
    pub fn certify(&mut self, annulus: AnnulusSpec, grid: usize) -> Result<CertificateStatus, SearchError> {
        if self.family == EmbeddingFamily::LaurentFamily {
            self.certificate = injectivity_certificate(&self.map, annulus, grid)?.status;
        }
        Ok(self.certificate)
    }
}

/// Boundary samples of `A_r`, anchored at `arg p` on both circles.
fn boundary_points(annulus: AnnulusSpec, p: Complex64, samples: usize) -> impl Iterator<Item = Complex64> {
    let theta = p.arg();
    let r = annulus.inner_radius();
    (0..samples).flat_map(move |k| {
        let u = Complex64::from_polar(1.0, theta + 2.0 * PI * k as f64 / samples as f64);
        [u, u * r]
    })
}

/// `min_z |φ_{L(p)}(L(z))|` over boundary samples, without certification.
fn raw_objective(map: &LaurentPolynomial, annulus: AnnulusSpec, p: Complex64, samples: usize) -> Result<f64, SearchError> {
    let a = map.eval(p);
    if !(a.norm() < 1.0) {
        return Err(SearchError::ImageEscapesDisc { max_modulus: a.norm() });
    }
    let mut max_modulus = 0.0_f64;
    let mut min_distance = f64::INFINITY;
    for z in boundary_points(annulus, p, samples) {
        let w = map.eval(z);
        let m = w.norm();
        if !m.is_finite() {
            return Err(SearchError::ImageEscapesDisc { max_modulus: f64::INFINITY });
        }
        max_modulus = max_modulus.max(m);
        if m >= 1.0 - UNIT_CIRCLE_SLACK {
            continue;
        }
        min_distance = min_distance.min(poincare_raw(a, w));
    }
    if max_modulus > 1.0 + UNIT_CIRCLE_SLACK {
        return Err(SearchError::ImageEscapesDisc { max_modulus });
    }
    if min_distance.is_infinite() {
        return Ok(1.0);
    }
    Ok(sigma_inv(HyperbolicValue::new(min_distance).map_err(PlanarError::from)?).value())
}

/// The squeezing lower bound certified by `candidate` at `p`, sampling each
/// boundary circle at `samples` points.
pub fn objective(
    candidate: &EmbeddingCandidate,
    annulus: AnnulusSpec,
    p: Complex64,
    samples: usize,
) -> Result<f64, SearchError> {
    if candidate.certificate != CertificateStatus::Certified {
        return Err(SearchError::NotCertified);
    }
    if samples < 8 {
        return Err(SearchError::InvalidSamples(samples));
    }
    if !annulus.contains_modulus(p.norm()) {
        return Err(PlanarError::PointOutsideAnnulus {
            modulus: p.norm(),
            inner: annulus.inner_radius(),
        }
        .into());
    }
    raw_objective(&candidate.map, annulus, p, samples)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Converged,
    BudgetExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub degree: usize,
    pub budget: usize,
    pub seed: u64,
    pub boundary_samples: usize,
    pub certificate_grid: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            degree: 2,
            budget: DEFAULT_BUDGET,
            seed: 0,
            boundary_samples: DEFAULT_BOUNDARY_SAMPLES,
            certificate_grid: DEFAULT_CERTIFICATE_GRID,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_value: f64,
    pub best_candidate: EmbeddingCandidate,
    pub tier_a_value: f64,
    pub conjecture_value: f64,
    pub conjecture_gap: f64,
    pub evaluations: usize,
    pub seed: u64,
    pub boundary_samples: usize,
    pub status: SearchStatus,
}

fn conjecture_for(annulus: AnnulusSpec, p: Complex64) -> Result<f64, SearchError> {
    let rho = annulus.fold(p.norm()).rho;
    Ok(annulus_conjectured_value(annulus, rho)?.value())
}

struct TierA {
    candidate: EmbeddingCandidate,
    value: f64,
}

fn tier_a_best(annulus: AnnulusSpec, p: Complex64, samples: usize) -> Result<TierA, SearchError> {
    let inclusion = EmbeddingCandidate::mobius_inclusion(p);
    let reflection = EmbeddingCandidate::mobius_reflection(annulus, p);
    let vi = objective(&inclusion, annulus, p, samples)?;
    let vr = objective(&reflection, annulus, p, samples)?;
    Ok(if vr > vi {
        TierA {
            candidate: reflection,
            value: vr,
        }
    } else {
        TierA {
            candidate: inclusion,
            value: vi,
        }
    })
}

fn tier_a_with_samples(annulus: AnnulusSpec, p: Complex64, samples: usize, seed: u64) -> Result<SearchResult, SearchError> {
    let best = tier_a_best(annulus, p, samples)?;
    let conjecture_value = conjecture_for(annulus, p)?;
    Ok(SearchResult {
        best_value: best.value,
        best_candidate: best.candidate,
        tier_a_value: best.value,
        conjecture_value,
        conjecture_gap: best.value - conjecture_value,
        evaluations: 2,
        seed,
        boundary_samples: samples,
        status: SearchStatus::Converged,
    })
}

/// Best of the inclusion and the reflection at [`DEFAULT_BOUNDARY_SAMPLES`].
pub fn tier_a_bound(annulus: AnnulusSpec, p: Complex64) -> Result<SearchResult, SearchError> {
    tier_a_with_samples(annulus, p, DEFAULT_BOUNDARY_SAMPLES, 0)
}

struct NelderMeadOutcome {
    used: usize,
    converged: bool,
}

/// Deterministic Nelder–Mead minimisation of `f` from a regular simplex of
/// edge `step` at `x0`, stopping after `budget` evaluations.
fn nelder_mead(f: &mut dyn FnMut(&[f64]) -> f64, x0: &[f64], step: f64, budget: usize) -> NelderMeadOutcome {
    let d = x0.len();
    let mut used = 0;
    let mut eval = |x: &[f64], used: &mut usize| -> Option<f64> {
        if *used >= budget {
            return None;
        }
        *used += 1;
        let v = f(x);
        Some(if v.is_nan() { f64::INFINITY } else { v })
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let mut x = x0.to_vec();
        if i > 0 {
            x[i - 1] += step;
        }
        match eval(&x, &mut used) {
            Some(v) => simplex.push((x, v)),
            None => return NelderMeadOutcome { used, converged: false },
        }
    }

    let combine = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect() };

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0].1, simplex[d].1);
        let size = simplex[1..]
            .iter()
            .map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if (worst - best).abs() < 1e-13 && size < 1e-10 {
            return NelderMeadOutcome { used, converged: true };
        }

        let mut centroid = vec![0.0; d];
        for (x, _) in &simplex[..d] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / d as f64;
            }
        }
        let worst_x = simplex[d].0.clone();

        let xr = combine(&centroid, &worst_x, -1.0);
        let Some(fr) = eval(&xr, &mut used) else {
            return NelderMeadOutcome { used, converged: false };
        };
        if fr < best {
            let xe = combine(&centroid, &worst_x, -2.0);
            let Some(fe) = eval(&xe, &mut used) else {
                simplex[d] = (xr, fr);
                return NelderMeadOutcome { used, converged: false };
            };
            simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[d - 1].1 {
            simplex[d] = (xr, fr);
            continue;
        }
        let (xc, target) = if fr < worst {
            (combine(&centroid, &xr, 0.5), fr)
        } else {
            (combine(&centroid, &worst_x, 0.5), worst)
        };
        let Some(fc) = eval(&xc, &mut used) else {
            return NelderMeadOutcome { used, converged: false };
        };
        if fc < target {
            simplex[d] = (xc, fc);
            continue;
        }
        let best_x = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x = combine(&best_x, &vertex.0, 0.5);
            let Some(v) = eval(&x, &mut used) else {
                return NelderMeadOutcome { used, converged: false };
            };
            *vertex = (x, v);
        }
    }
}

/// Rescales `map` so its boundary image stays within `1 − START_MARGIN`.
fn pull_inside(map: LaurentPolynomial, annulus: AnnulusSpec, p: Complex64, samples: usize) -> LaurentPolynomial {
    let max = boundary_points(annulus, p, samples)
        .map(|z| map.eval(z).norm())
        .fold(0.0, f64::max);
    if max > 1.0 - START_MARGIN {
        map.scaled((1.0 - START_MARGIN) / max)
    } else {
        map
    }
}

/// Multi-start Nelder–Mead search over Laurent polynomials of `config.degree`.
///
/// Starts are the two Tier-A maps followed by seeded random perturbations of
/// them. The simplex sees uncertified objective values; any value that beats
/// the certified incumbent by more than [`IMPROVEMENT_THRESHOLD`] is certified
/// first, and a failed certificate turns the value into a penalty. The
/// incumbent is re-evaluated at twice the boundary sampling and dropped in
/// favour of Tier A if the two resolutions disagree by more than
/// [`RESAMPLING_TOLERANCE`]; the reported value is the finer one.
pub fn tier_b_search(annulus: AnnulusSpec, p: Complex64, config: SearchConfig) -> Result<SearchResult, SearchError> {
    if config.degree > MAX_DEGREE {
        return Err(SearchError::InvalidDegree(config.degree));
    }
    if config.budget == 0 {
        return Err(SearchError::InvalidBudget);
    }
    if config.boundary_samples < 8 {
        return Err(SearchError::InvalidSamples(config.boundary_samples));
    }
    let samples = config.boundary_samples;
    let tier_a = tier_a_with_samples(annulus, p, samples, config.seed)?;
    if config.degree == 0 {
        return Ok(tier_a);
    }

    let m = config.degree;
    let r = annulus.inner_radius();
    let seeds = [
        LaurentPolynomial::monomial(m, 1, Complex64::new(1.0, 0.0))?,
        LaurentPolynomial::monomial(m, -1, Complex64::new(r, 0.0))?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let noise = Normal::new(0.0, START_PERTURBATION).expect("positive deviation");
    let mut starts: Vec<Vec<f64>> = seeds.iter().map(LaurentPolynomial::to_reals).collect();
    for k in 0..MAX_STARTS - seeds.len() {
        let x: Vec<f64> = seeds[k % seeds.len()]
            .to_reals()
            .into_iter()
            .map(|v| v + noise.sample(&mut rng))
            .collect();
        starts.push(pull_inside(LaurentPolynomial::from_reals(m, &x), annulus, p, samples).to_reals());
    }
    starts.truncate(config.budget.min(MAX_STARTS));

    let mut incumbent: Option<(EmbeddingCandidate, f64)> = None;
    let mut incumbent_value = tier_a.tier_a_value;
    let mut used = 0;
    let mut exhausted = false;
    let share = config.budget / starts.len();
    let extra = config.budget % starts.len();
    for (i, x0) in starts.iter().enumerate() {
        let budget = share + usize::from(i < extra);
        let mut f = |x: &[f64]| -> f64 {
            let map = LaurentPolynomial::from_reals(m, x);
            match raw_objective(&map, annulus, p, samples) {
                Err(SearchError::ImageEscapesDisc { max_modulus }) => 1.0 + (max_modulus - 1.0).min(1e6),
                Err(_) => 2.0,
                Ok(v) => {
                    if v > incumbent_value + IMPROVEMENT_THRESHOLD {
                        let mut candidate = EmbeddingCandidate::laurent(map, p);
                        match candidate.certify(annulus, config.certificate_grid) {
                            Ok(CertificateStatus::Certified) => {
                                incumbent_value = v;
                                incumbent = Some((candidate, v));
                            }
                            _ => return 1.0,
                        }
                    }
                    -v
                }
            }
        };
        let outcome = nelder_mead(&mut f, x0, SIMPLEX_STEP, budget);
        used += outcome.used;
        exhausted |= !outcome.converged;
    }

    let fine = 2 * samples;
    let mut best_candidate = tier_a.best_candidate.clone();
    let mut best_value = objective(&best_candidate, annulus, p, fine)?;
    if let Some((candidate, coarse)) = incumbent {
        let v = objective(&candidate, annulus, p, fine)?;
        if (v - coarse).abs() <= RESAMPLING_TOLERANCE && v > best_value {
            best_candidate = candidate;
            best_value = v;
        }
    }
    Ok(SearchResult {
        best_value,
        best_candidate,
        tier_a_value: tier_a.tier_a_value,
        conjecture_value: tier_a.conjecture_value,
        conjecture_gap: best_value - tier_a.conjecture_value,
        evaluations: tier_a.evaluations + used,
        seed: config.seed,
        boundary_samples: samples,
        status: if exhausted {
            SearchStatus::BudgetExhausted
        } else {
            SearchStatus::Converged
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanTier {
    A,
    B(SearchConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub rhos: Vec<f64>,
    pub values: Vec<f64>,
    /// Adjacent pairs with `values[i + 1] ≤ values[i]`.
    pub inversions: usize,
}

/// Evaluates the chosen tier at `ρ_i = √r + i(1 − √r)/grid`, `i < grid`.
pub fn monotonicity_scan(annulus: AnnulusSpec, grid: usize, tier: ScanTier) -> Result<MonotonicityReport, SearchError> {
    if grid < 8 {
        return Err(SearchError::InvalidGrid(grid));
    }
    let start = annulus.fundamental_start();
    let rhos: Vec<f64> = (0..grid)
        .map(|i| start + i as f64 * (1.0 - start) / grid as f64)
        .collect();
    let values = rhos
        .iter()
        .map(|&rho| {
            let p = Complex64::new(rho, 0.0);
            match tier {
                ScanTier::A => tier_a_bound(annulus, p),
                ScanTier::B(config) => tier_b_search(annulus, p, config),
            }
            .map(|res| res.best_value)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let inversions = values.windows(2).filter(|w| w[1] <= w[0]).count();
    Ok(MonotonicityReport {
        rhos,
        values,
        inversions,
    })
}
