//! Property tests for the module invariants.

use num_complex::Complex64;
use proptest::prelude::*;

use squeeze_core::corpus::{injective_corpus, refutation_corpus};
use squeeze_core::hyperbolic::{
    disc_mobius, kobayashi_ball, metric_T, poincare_disc, sigma, sigma_inv, BallPoint, DiscPoint, EuclideanRadius,
    HyperbolicValue,
};
use squeeze_core::planar::{
    annulus_conjectured_value, annulus_lower_bound, c_constant, punctured_upper_bound, AnnulusSpec,
    PuncturedDomainSpec,
};
use squeeze_core::rouche::{
    injectivity_certificate, rouche_dominance, zero_count, zero_count_adaptive, CertificateStatus, CircleContour,
    SampledMap, SumMap,
};
use squeeze_core::search::{tier_a_bound, tier_b_search, SearchConfig};
use squeeze_core::symmetric::{
    contains, kubota_constant, product_constant, punctured_ball_squeezing, ClassicalDomainSpec, MatrixPoint,
};

fn disc_point(max: f64) -> impl Strategy<Value = DiscPoint> {
    (0.0..max, 0.0..std::f64::consts::TAU).prop_map(|(m, t)| DiscPoint::new(Complex64::from_polar(m, t)).unwrap())
}

fn radius(max: f64) -> impl Strategy<Value = f64> {
    0.0..max
}

fn rad(x: f64) -> EuclideanRadius {
    EuclideanRadius::new(x).unwrap()
}

fn hv(x: f64) -> HyperbolicValue {
    HyperbolicValue::new(x).unwrap()
}

fn classical_spec() -> impl Strategy<Value = ClassicalDomainSpec> {
    prop_oneof![
        (1usize..4, 0usize..3).prop_map(|(r, extra)| ClassicalDomainSpec::type_i(r, r + extra).unwrap()),
        (1usize..4).prop_map(|p| ClassicalDomainSpec::type_ii(p).unwrap()),
        (2usize..5).prop_map(|q| ClassicalDomainSpec::type_iii(q).unwrap()),
        (2usize..5).prop_map(|n| ClassicalDomainSpec::type_iv(n).unwrap()),
    ]
}

fn spec_point(spec: ClassicalDomainSpec) -> impl Strategy<Value = MatrixPoint> {
    proptest::collection::vec((-0.8f64..0.8, -0.8f64..0.8), spec.complex_dimension()).prop_map(move |v| {
        let coords: Vec<_> = v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        MatrixPoint::from_coordinates(spec, &coords).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sigma_is_strictly_increasing(a in radius(0.999_999), b in radius(0.999_999)) {
        prop_assume!(a != b);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(sigma(rad(lo)).value() < sigma(rad(hi)).value());
    }

    #[test]
    fn sigma_round_trips(r in radius(0.999), w in 0.0f64..7.0) {
        prop_assert!((sigma_inv(sigma(rad(r))).value() - r).abs() <= 1e-12);
        prop_assert!((sigma(sigma_inv(hv(w))).value() - w).abs() <= 1e-12);
    }

    #[test]
    fn sigma_inv_is_subadditive(u in 0.0f64..40.0, v in 0.0f64..40.0) {
        let s = |w: f64| sigma_inv(hv(w)).value();
        prop_assert!(s(u + v) <= s(u) + s(v) + 1e-15);
    }

    #[test]
    fn metric_axioms(a in disc_point(0.999), b in disc_point(0.999), c in disc_point(0.999)) {
        let t = |x: DiscPoint, y: DiscPoint| metric_T(poincare_disc(x, y)).value();
        prop_assert!((t(a, b) - t(b, a)).abs() <= 1e-12);
        prop_assert_eq!(t(a, a), 0.0);
        prop_assert!(a == b || t(a, b) > 0.0);
        prop_assert!(t(a, c) <= t(a, b) + t(b, c) + 1e-12);
    }

    #[test]
    fn poincare_is_mobius_invariant(a in disc_point(0.9), x in disc_point(0.9), y in disc_point(0.9)) {
        let before = poincare_disc(x, y).value();
        let after = poincare_disc(disc_mobius(a, x), disc_mobius(a, y)).value();
        prop_assert!((before - after).abs() <= 1e-12, "{} vs {}", before, after);
    }

    #[test]
    fn kobayashi_in_dimension_one_is_poincare(x in disc_point(0.999), y in disc_point(0.999)) {
        let k = kobayashi_ball(&BallPoint::new(vec![x.z()]).unwrap(), &BallPoint::new(vec![y.z()]).unwrap()).unwrap();
        prop_assert!((k.value() - poincare_disc(x, y).value()).abs() <= 1e-12);
    }

    #[test]
    fn classical_domains_contain_origin(spec in classical_spec()) {
        prop_assert!(contains(spec, &MatrixPoint::zero(spec).unwrap()).unwrap());
    }

    #[test]
    fn classical_domains_are_star_shaped(
        (spec, z) in classical_spec().prop_flat_map(|s| (Just(s), spec_point(s))),
        t in 0.0f64..1.0,
    ) {
        if contains(spec, &z).unwrap() {
            prop_assert!(contains(spec, &z.scaled(t)).unwrap());
        }
    }

    #[test]
    fn single_product_is_the_constant(spec in classical_spec()) {
        prop_assert_eq!(product_constant(&[spec]).unwrap().value(), kubota_constant(spec).unwrap().value());
    }

    #[test]
    fn products_shrink(specs in proptest::collection::vec(classical_spec(), 1..5)) {
        let p = product_constant(&specs).unwrap().value();
        let min = specs.iter().map(|s| kubota_constant(*s).unwrap().value()).fold(1.0, f64::min);
        if specs.len() >= 2 {
            prop_assert!(p < min);
        } else {
            prop_assert!(p <= min);
        }
    }

    #[test]
    fn constant_is_one_exactly_for_unit_weight(spec in classical_spec()) {
        let v = kubota_constant(spec).unwrap().value();
        prop_assert!(v > 0.0 && v <= 1.0);
        prop_assert_eq!(v == 1.0, spec.inverse_square() == 1);
    }

    #[test]
    fn annulus_bound_is_reflection_symmetric(r in 0.01f64..0.95, t in 0.001f64..0.999, arg in 0.0f64..6.28) {
        let a = AnnulusSpec::new(r).unwrap();
        let m = r + t * (1.0 - r);
        let m2 = r / m;
        prop_assume!(a.contains_modulus(m2));
        let v1 = annulus_lower_bound(a, Complex64::from_polar(m, arg)).unwrap().value();
        let v2 = annulus_lower_bound(a, Complex64::from_polar(m2, -arg)).unwrap().value();
        prop_assert!((v1 - v2).abs() <= 1e-12);
    }

    #[test]
    fn folded_conjecture_is_the_lower_bound(r in 0.01f64..0.95, t in 0.001f64..0.999) {
        let a = AnnulusSpec::new(r).unwrap();
        let m = r + t * (1.0 - r);
        let rho = a.fold(m).rho;
        let conj = annulus_conjectured_value(a, rho).unwrap().value();
        let low = annulus_lower_bound(a, Complex64::new(m, 0.0)).unwrap().value();
        prop_assert!((conj - low).abs() <= 1e-15);
    }

    #[test]
    fn conjecture_is_strictly_increasing(r in 0.01f64..0.95, s in 0.0f64..1.0, t in 0.0f64..1.0) {
        prop_assume!(s != t);
        let a = AnnulusSpec::new(r).unwrap();
        let q = r.sqrt();
        let (lo, hi) = if s < t { (s, t) } else { (t, s) };
        let x = q + lo * (1.0 - q) * 0.999;
        let y = q + hi * (1.0 - q) * 0.999;
        prop_assume!(y - x > 1e-9);
        prop_assert!(annulus_conjectured_value(a, x).unwrap().value() < annulus_conjectured_value(a, y).unwrap().value());
    }

    #[test]
    fn conjecture_minimum(r in 0.01f64..0.95) {
        let a = AnnulusSpec::new(r).unwrap();
        let q = r.sqrt();
        let closed = ((1.0 + q) / (1.0 + r).sqrt()).ln().tanh();
        prop_assert!((annulus_conjectured_value(a, q).unwrap().value() - closed).abs() <= 1e-12);
    }

    #[test]
    fn punctured_upper_meets_exact(
        coords in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..4),
        radius in 1e-6f64..0.999,
    ) {
        let norm = coords.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        let z: Vec<_> = coords.iter().map(|(a, b)| Complex64::new(*a, *b) * (radius / norm)).collect();
        let n = z.len();
        let z = BallPoint::new(z).unwrap();
        let domain = PuncturedDomainSpec::new(n, vec![BallPoint::origin(n).unwrap()]).unwrap();
        let upper = punctured_upper_bound(&domain, &z).unwrap().value();
        let exact = punctured_ball_squeezing(&z).unwrap().value();
        prop_assert!((upper - exact).abs() <= 1e-12);
    }

    #[test]
    fn bound_values_lie_in_unit_interval(
        r in 0.01f64..0.95,
        t in 0.0f64..1.0,
        punctures in proptest::collection::vec((-0.7f64..0.7, -0.7f64..0.7), 1..4),
        z in (-0.7f64..0.7, -0.7f64..0.7),
    ) {
        let a = AnnulusSpec::new(r).unwrap();
        let m = r + (t * (1.0 - r)).max(1e-9);
        prop_assume!(a.contains_modulus(m));
        let v = annulus_lower_bound(a, Complex64::new(m, 0.0)).unwrap().value();
        prop_assert!(v > 0.0 && v <= 1.0);
        let pts: Vec<_> = punctures.iter().map(|(x, y)| BallPoint::new(vec![Complex64::new(*x, *y)]).unwrap()).collect();
        let z = BallPoint::new(vec![Complex64::new(z.0, z.1)]).unwrap();
        prop_assume!(pts.iter().all(|p| *p != z));
        if let Ok(domain) = PuncturedDomainSpec::new(1, pts) {
            let u = punctured_upper_bound(&domain, &z).unwrap().value();
            prop_assert!(u > 0.0 && u <= 1.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sampled_grid_check_c_constant_shrinks_as_w_nears_v(u in 0.05f64..0.4, dv in 0.05f64..0.3, dw in 0.02f64..0.2) {
        let v = u + dv;
        let w = (v + dw).min(0.99);
        prop_assume!(w > v + 0.01);
        let wide = c_constant(u, v, w).unwrap();
        let narrow = c_constant(u, v, (v + w) / 2.0).unwrap();
        prop_assert!(wide > 0.0 && narrow > 0.0);
        prop_assert!(narrow < wide, "sampled grid monotonicity: {} !< {}", narrow, wide);
    }

    #[test]
    fn rouche_consistency_for_perturbed_monomials(k in 1i32..6, eps in 0.0f64..0.9, j in 0i32..6, phase in 0.0f64..6.28) {
        let g_coef = Complex64::from_polar(eps, phase);
        let f = SampledMap::new(move |z: Complex64| z.powi(k), move |z: Complex64| z.powi(k - 1) * k as f64);
        let g = SampledMap::new(
            move |z: Complex64| g_coef * z.powi(j),
            move |z: Complex64| if j == 0 { Complex64::new(0.0, 0.0) } else { g_coef * j as f64 * z.powi(j - 1) },
        );
        let circle = [CircleContour::centered(1.0, 64).unwrap()];
        if rouche_dominance(&f, &g, &circle) {
            let nf = zero_count_adaptive(&f, &circle).unwrap().count;
            let nfg = zero_count_adaptive(&SumMap(&f, &g), &circle).unwrap().count;
            prop_assert_eq!(nf, nfg);
        }
    }

    #[test]
    fn tier_a_reproduces_closed_form(r in 0.02f64..0.9, t in 0.0f64..0.999, arg in 0.0f64..6.28) {
        let a = AnnulusSpec::new(r).unwrap();
        let q = r.sqrt();
        let p = Complex64::from_polar(q + t * (1.0 - q), arg);
        let tier = tier_a_bound(a, p).unwrap().best_value;
        let closed = annulus_lower_bound(a, p).unwrap().value();
        prop_assert!((tier - closed).abs() <= 1e-9);
    }
}

#[test]
fn monomial_counts_converge() {
    for k in 1..=8 {
        let f = SampledMap::new(move |z: Complex64| z.powi(k), move |z: Complex64| z.powi(k - 1) * k as f64);
        let mut n = 64;
        while n <= 4096 {
            let c = zero_count(&f, &[CircleContour::centered(1.0, n).unwrap()]).unwrap();
            assert_eq!(c.count, k as i64);
            assert!(c.residual < 1e-8);
            n *= 2;
        }
    }
}

#[test]
fn refutation_corpus_is_never_certified() {
    for case in refutation_corpus() {
        for grid in [8, 16, 32] {
            let cert = injectivity_certificate(&case.map, case.annulus, grid).unwrap();
            assert_ne!(cert.status, CertificateStatus::Certified, "{} at grid {grid}", case.name);
        }
    }
}

#[test]
fn refining_grids_never_refutes_injective_maps() {
    for case in injective_corpus() {
        let mut previous = None;
        for grid in [8, 16, 32] {
            let status = injectivity_certificate(&case.map, case.annulus, grid).unwrap().status;
            if previous == Some(CertificateStatus::Certified) {
                assert_ne!(status, CertificateStatus::Refuted, "{} at grid {grid}", case.name);
            }
            previous = Some(status);
        }
    }
}

#[test]
fn search_containment_and_determinism() {
    let a = AnnulusSpec::new(0.3).unwrap();
    for (rho, seed) in [(0.6, 1u64), (0.9, 2)] {
        let p = Complex64::new(rho, 0.0);
        let config = SearchConfig {
            degree: 1,
            budget: 80,
            seed,
            ..SearchConfig::default()
        };
        let first = tier_b_search(a, p, config).unwrap();
        assert!(first.best_value >= first.tier_a_value - 1e-9);
        assert!(first.best_value > 0.0 && first.best_value <= 1.0);
        assert_eq!(first.best_candidate.certificate, CertificateStatus::Certified);
        assert_eq!(tier_b_search(a, p, config).unwrap(), first);
    }
}
