//! Bundled invariant suites for `squeeze check`.

use std::io::Write;
use std::process::ExitCode;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use squeeze_core::corpus::{dominance_corpus, injective_corpus, refutation_corpus};
use squeeze_core::hyperbolic::{
    disc_mobius, kobayashi_ball, metric_T, poincare_disc, sigma, sigma_inv, BallPoint, DiscPoint, EuclideanRadius,
    HyperbolicValue,
};
use squeeze_core::planar::{
    annulus_conjectured_value, annulus_lower_bound, annulus_minimum_closed_form, c_constant,
    excised_domain_lower_bound, krantz_configuration, lipschitz_check, punctured_upper_bound, AnnulusSpec, ExactDomain,
    PuncturedDomainSpec,
};
use squeeze_core::rouche::{
    injectivity_certificate, rouche_dominance, zero_count, zero_count_adaptive, CertificateStatus, CircleContour,
    SampledMap, SumMap,
};
use squeeze_core::search::{monotonicity_scan, tier_a_bound, tier_b_search, ScanTier, SearchConfig};
use squeeze_core::symmetric::{
    contains, kubota_constant, product_constant, sandwich_check_type_i, ClassicalDomainSpec, MatrixPoint,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Metrics,
    Rouche,
    Symmetric,
    Planar,
    Search,
    All,
}

const TOL: f64 = 1e-12;
const TRIALS: usize = 1000;

/// `Err` carries the witness values of the first violation.
type Check = Result<(), String>;

struct Invariant {
    module: &'static str,
    name: &'static str,
    run: fn(&mut ChaCha8Rng) -> Check,
}

fn ensure(ok: bool, witness: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(witness())
    }
}

fn lift<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ball_point(rng: &mut ChaCha8Rng, n: usize) -> BallPoint {
    loop {
        let v: Vec<Complex64> = (0..n)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 && norm < 0.999 {
            return BallPoint::new(v).expect("inside the ball");
        }
    }
}

fn disc_point(rng: &mut ChaCha8Rng) -> DiscPoint {
    DiscPoint::new(ball_point(rng, 1).coords()[0]).expect("inside the disc")
}

fn hv(w: f64) -> HyperbolicValue {
    HyperbolicValue::new(w).expect("non-negative")
}

// hyperbolic_core

fn sigma_round_trip(rng: &mut ChaCha8Rng) -> Check {
    for _ in 0..TRIALS {
        let r: f64 = rng.random_range(0.0..0.999);
        let back = sigma_inv(sigma(lift(EuclideanRadius::new(r))?)).value();
        ensure((back - r).abs() <= TOL, || format!("r={r} sigma_inv(sigma(r))={back}"))?;
    }
    Ok(())
}

fn sigma_inv_subadditive(rng: &mut ChaCha8Rng) -> Check {
    let s = |w: f64| sigma_inv(hv(w)).value();
    for _ in 0..TRIALS {
        let (u, v) = (rng.random_range(0.0..20.0), rng.random_range(0.0..20.0));
        ensure(s(u + v) <= s(u) + s(v) + TOL, || format!("u={u} v={v}"))?;
    }
    Ok(())
}

fn metric_axioms(rng: &mut ChaCha8Rng) -> Check {
    let t = |a: DiscPoint, b: DiscPoint| metric_T(poincare_disc(a, b)).value();
    for _ in 0..TRIALS {
        let (a, b, z) = (disc_point(rng), disc_point(rng), disc_point(rng));
        let (a_, b_, z_) = (a.z(), b.z(), z.z());
        ensure((t(a, b) - t(b, a)).abs() <= TOL, || format!("symmetry a={a_} b={b_}"))?;
        ensure(t(a, a) == 0.0, || format!("T(a,a)={} a={a_}", t(a, a)))?;
        ensure(a == b || t(a, b) > 0.0, || format!("T(a,b)=0 a={a_} b={b_}"))?;
        ensure(t(a, z) <= t(a, b) + t(b, z) + TOL, || {
            format!("triangle a={a_} b={b_} c={z_}")
        })?;
    }
    Ok(())
}

fn mobius_invariance(rng: &mut ChaCha8Rng) -> Check {
    for _ in 0..TRIALS {
        let (a, x, y) = (disc_point(rng), disc_point(rng), disc_point(rng));
        let before = poincare_disc(x, y).value();
        let after = poincare_disc(disc_mobius(a, x), disc_mobius(a, y)).value();
        // relative: distances near the rim are large
        ensure((before - after).abs() <= 1e-9 * before.max(1.0), || {
            format!("a={} x={} y={} before={before} after={after}", a.z(), x.z(), y.z())
        })?;
    }
    Ok(())
}

fn kobayashi_disc(rng: &mut ChaCha8Rng) -> Check {
    for _ in 0..TRIALS {
        let (x, y) = (disc_point(rng), disc_point(rng));
        let bx = lift(BallPoint::new(vec![x.z()]))?;
        let by = lift(BallPoint::new(vec![y.z()]))?;
        let k = lift(kobayashi_ball(&bx, &by))?.value();
        let p = poincare_disc(x, y).value();
        ensure((k - p).abs() <= 1e-9 * p.max(1.0), || {
            format!("x={} y={} K={k} P={p}", x.z(), y.z())
        })?;
    }
    Ok(())
}

// rouche_counter

fn monomial_counts(_: &mut ChaCha8Rng) -> Check {
    for k in 1..=8 {
        let f = SampledMap::new(
            move |z: Complex64| z.powi(k),
            move |z: Complex64| z.powi(k - 1) * k as f64,
        );
        let mut n = 64;
        while n <= 4096 {
            let count = lift(zero_count(&f, &[lift(CircleContour::centered(1.0, n))?]))?;
            ensure(count.count == k as i64 && count.residual < 1e-8, || {
                format!("k={k} samples={n} count={} residual={}", count.count, count.residual)
            })?;
            n *= 2;
        }
    }
    Ok(())
}

fn cubic_count(_: &mut ChaCha8Rng) -> Check {
    let f = SampledMap::new(|z: Complex64| z.powi(3) + z * 0.5, |z: Complex64| z * z * 3.0 + 0.5);
    let count = lift(zero_count_adaptive(&f, &[lift(CircleContour::centered(1.0, 64))?]))?.count;
    ensure(count == 3, || format!("z^3+0.5z count={count}"))
}

fn rouche_consistency(_: &mut ChaCha8Rng) -> Check {
    for case in dominance_corpus() {
        let dominated = rouche_dominance(&case.f, &case.g, &case.contours);
        ensure(dominated == case.dominates, || {
            format!("{} dominance={dominated}", case.name)
        })?;
        if dominated {
            let nf = lift(zero_count_adaptive(&case.f, &case.contours))?.count;
            let nfg = lift(zero_count_adaptive(&SumMap(&case.f, &case.g), &case.contours))?.count;
            ensure(nf == nfg, || format!("{} N(f)={nf} N(f+g)={nfg}", case.name))?;
        }
    }
    Ok(())
}

fn injective_maps_certified(_: &mut ChaCha8Rng) -> Check {
    for case in injective_corpus() {
        let status = lift(injectivity_certificate(&case.map, case.annulus, 16))?.status;
        ensure(status == CertificateStatus::Certified, || {
            format!("{} status={status:?}", case.name)
        })?;
    }
    Ok(())
}

fn non_injective_maps_not_certified(_: &mut ChaCha8Rng) -> Check {
    for case in refutation_corpus() {
        let status = lift(injectivity_certificate(&case.map, case.annulus, 16))?.status;
        ensure(status != CertificateStatus::Certified, || {
            format!("{} status={status:?}", case.name)
        })?;
    }
    Ok(())
}

fn square_refuted(_: &mut ChaCha8Rng) -> Check {
    let square = SampledMap::new(|z: Complex64| z * z, |z: Complex64| z * 2.0);
    let status = lift(injectivity_certificate(&square, lift(AnnulusSpec::new(0.5))?, 16))?.status;
    ensure(status == CertificateStatus::Refuted, || {
        format!("z^2 on A_0.5 status={status:?}")
    })
}

// symmetric_domains

fn specs() -> Vec<ClassicalDomainSpec> {
    let mut out = Vec::new();
    for r in 1..=4 {
        for s in r..=4 {
            out.push(ClassicalDomainSpec::TypeI { r, s });
        }
    }
    out.extend((1..=4).map(|p| ClassicalDomainSpec::TypeII { p }));
    out.extend((2..=5).map(|q| ClassicalDomainSpec::TypeIII { q }));
    out.extend((2..=5).map(|n| ClassicalDomainSpec::TypeIV { n }));
    out
}

fn kubota_table(_: &mut ChaCha8Rng) -> Check {
    for r in 1..=10usize {
        for s in r..=10 {
            let v = lift(kubota_constant(lift(ClassicalDomainSpec::type_i(r, s))?))?.value();
            let expect = (r as f64).powf(-0.5);
            ensure((v - expect).abs() <= 1e-15, || {
                format!("typeI:{r},{s} value={v} expected={expect}")
            })?;
        }
    }
    for p in 1..=10usize {
        let v = lift(kubota_constant(lift(ClassicalDomainSpec::type_ii(p))?))?.value();
        let expect = (p as f64).powf(-0.5);
        ensure((v - expect).abs() <= 1e-15, || {
            format!("typeII:{p} value={v} expected={expect}")
        })?;
    }
    for q in 2..=10usize {
        let v = lift(kubota_constant(lift(ClassicalDomainSpec::type_iii(q))?))?.value();
        let expect = ((q / 2) as f64).powf(-0.5);
        ensure((v - expect).abs() <= 1e-15, || {
            format!("typeIII:{q} value={v} expected={expect}")
        })?;
    }
    for n in 2..=10usize {
        let v = lift(kubota_constant(lift(ClassicalDomainSpec::type_iv(n))?))?.value();
        let expect = 2f64.powf(-0.5);
        ensure((v - expect).abs() <= 1e-15, || {
            format!("typeIV:{n} value={v} expected={expect}")
        })?;
    }
    Ok(())
}

fn product_formula(_: &mut ChaCha8Rng) -> Check {
    let iv = |n| ClassicalDomainSpec::type_iv(n).expect("n ≥ 2");
    let v = lift(product_constant(&[iv(3), iv(7)]))?.value();
    ensure((v - 0.5).abs() <= 1e-15, || format!("typeIV:3+typeIV:7 value={v}"))?;
    let all = specs();
    for pair in all.windows(2) {
        let p = lift(product_constant(pair))?.value();
        let (a, b) = (
            lift(kubota_constant(pair[0]))?.value(),
            lift(kubota_constant(pair[1]))?.value(),
        );
        let expect = (a.powi(-2) + b.powi(-2)).powf(-0.5);
        ensure((p - expect).abs() <= 1e-15, || {
            format!("{}+{} value={p} expected={expect}", pair[0], pair[1])
        })?;
    }
    Ok(())
}

fn origin_and_star_shape(rng: &mut ChaCha8Rng) -> Check {
    for spec in specs() {
        let zero = lift(MatrixPoint::zero(spec))?;
        ensure(lift(contains(spec, &zero))?, || format!("{spec} origin"))?;
        for _ in 0..50 {
            let coords: Vec<_> = (0..spec.complex_dimension())
                .map(|_| c(rng.random_range(-0.6..0.6), rng.random_range(-0.6..0.6)))
                .collect();
            let z = lift(MatrixPoint::from_coordinates(spec, &coords))?;
            if lift(contains(spec, &z))? {
                let t: f64 = rng.random();
                ensure(lift(contains(spec, &z.scaled(t)))?, || {
                    format!("{spec} point={coords:?} t={t}")
                })?;
            }
        }
    }
    Ok(())
}

fn sandwich(rng: &mut ChaCha8Rng) -> Check {
    for (r, s) in [(1, 1), (2, 2), (2, 3)] {
        let report = lift(sandwich_check_type_i(r, s, 1000, rng.random()))?;
        ensure(report.holds(), || {
            format!(
                "typeI:{r},{s} inner_failures={} outer_failures={} max_outer_ratio={}",
                report.inner_failures, report.outer_failures, report.max_outer_ratio
            )
        })?;
    }
    Ok(())
}

// planar_bounds

fn annulus_golden_value(_: &mut ChaCha8Rng) -> Check {
    let v = lift(annulus_lower_bound(lift(AnnulusSpec::new(0.25))?, c(0.5, 0.0)))?.value();
    ensure((v - 2.0 / 7.0).abs() <= TOL, || format!("r=0.25 rho=0.5 value={v}"))?;
    for r in [0.1, 0.25, 0.5, 0.81] {
        let a = lift(AnnulusSpec::new(r))?;
        let v = lift(annulus_lower_bound(a, c(r.sqrt(), 0.0)))?.value();
        let closed = annulus_minimum_closed_form(a);
        ensure((v - closed).abs() <= TOL, || {
            format!("r={r} value={v} closed_form={closed}")
        })?;
    }
    Ok(())
}

fn boundary_limit(_: &mut ChaCha8Rng) -> Check {
    let a = lift(AnnulusSpec::new(0.25))?;
    let mut previous = 0.0;
    for k in 1..=10 {
        let rho = 1.0 - 10f64.powi(-k);
        let v = lift(annulus_lower_bound(a, c(rho, 0.0)))?.value();
        ensure(v > previous, || format!("k={k} value={v} previous={previous}"))?;
        previous = v;
    }
    ensure(previous > 0.999, || format!("k=10 value={previous}"))
}

fn reflection_symmetry(rng: &mut ChaCha8Rng) -> Check {
    for _ in 0..TRIALS {
        let r = rng.random_range(0.01..0.95);
        let a = lift(AnnulusSpec::new(r))?;
        let z = Complex64::from_polar(
            rng.random_range(r + 1e-3 * (1.0 - r)..1.0 - 1e-3 * (1.0 - r)),
            rng.random_range(0.0..std::f64::consts::TAU),
        );
        let image = r / z.conj();
        let (v1, v2) = (
            lift(annulus_lower_bound(a, z))?.value(),
            lift(annulus_lower_bound(a, image))?.value(),
        );
        ensure((v1 - v2).abs() <= TOL, || {
            format!("r={r} z={z} s(z)={v1} s(r/conj z)={v2}")
        })?;
    }
    Ok(())
}

fn conjecture_increasing(_: &mut ChaCha8Rng) -> Check {
    for r in [0.05, 0.25, 0.5, 0.81] {
        let a = lift(AnnulusSpec::new(r))?;
        let start = a.fundamental_start();
        let mut previous = f64::NEG_INFINITY;
        for i in 0..256 {
            let rho = start + i as f64 * (1.0 - start) / 256.0;
            let v = lift(annulus_conjectured_value(a, rho))?.value();
            ensure(v > previous, || {
                format!("r={r} rho={rho} value={v} previous={previous}")
            })?;
            previous = v;
        }
    }
    Ok(())
}

fn punctured_ball_identity(rng: &mut ChaCha8Rng) -> Check {
    for n in [2usize, 3] {
        let domain = lift(PuncturedDomainSpec::new(n, vec![lift(BallPoint::origin(n))?]))?;
        for _ in 0..100 {
            let z = ball_point(rng, n);
            let v = lift(punctured_upper_bound(&domain, &z))?.value();
            ensure((v - z.norm()).abs() <= TOL, || {
                format!("n={n} z={:?} bound={v} norm={}", z.coords(), z.norm())
            })?;
        }
    }
    Ok(())
}

fn lipschitz(rng: &mut ChaCha8Rng) -> Check {
    let pairs: Vec<_> = (0..TRIALS).map(|_| (ball_point(rng, 2), ball_point(rng, 2))).collect();
    let report = lift(lipschitz_check(ExactDomain::PuncturedBall(2), &pairs))?;
    ensure(report.holds, || format!("worst_slack={}", report.worst_slack))
}

fn c_constant_range(rng: &mut ChaCha8Rng) -> Check {
    for _ in 0..50 {
        let u = rng.random_range(0.05..0.3);
        let v = u + rng.random_range(0.05..0.3);
        let w = v + rng.random_range(0.02..0.3);
        let value = lift(c_constant(u, v, w))?;
        ensure(value > 0.0 && value < 1.0, || format!("u={u} v={v} w={w} c={value}"))?;
    }
    Ok(())
}

fn krantz_far_region(_: &mut ChaCha8Rng) -> Check {
    let domain = lift(krantz_configuration(0.2, 0.255, 0.265, -3..=3, true))?;
    let cert = lift(excised_domain_lower_bound(&domain, c(0.0, 0.0)))?;
    let expect = domain.far_constant();
    ensure(cert.value() == expect && cert.method() == "excised-far", || {
        format!("value={} method={} far_constant={expect}", cert.value(), cert.method())
    })
}

// extremal_search

fn tier_a_closed_form(rng: &mut ChaCha8Rng) -> Check {
    for _ in 0..20 {
        let r = rng.random_range(0.02..0.9);
        let a = lift(AnnulusSpec::new(r))?;
        let rho = r + rng.random_range(0.01..0.99) * (1.0 - r);
        let p = c(rho, 0.0);
        let tier = lift(tier_a_bound(a, p))?.best_value;
        let closed = lift(annulus_lower_bound(a, p))?.value();
        ensure((tier - closed).abs() <= 1e-9, || {
            format!("r={r} rho={rho} tier_a={tier} closed_form={closed}")
        })?;
    }
    Ok(())
}

fn tier_a_monotone(_: &mut ChaCha8Rng) -> Check {
    for r in [0.05, 0.1, 0.25, 0.5, 0.81] {
        let report = lift(monotonicity_scan(lift(AnnulusSpec::new(r))?, 256, ScanTier::A))?;
        ensure(report.inversions == 0, || {
            format!("r={r} inversions={}", report.inversions)
        })?;
    }
    Ok(())
}

fn search_containment(rng: &mut ChaCha8Rng) -> Check {
    let a = lift(AnnulusSpec::new(0.25))?;
    let p = c(0.5, 0.0);
    let config = SearchConfig {
        degree: 1,
        budget: 80,
        seed: rng.random(),
        ..SearchConfig::default()
    };
    let first = lift(tier_b_search(a, p, config))?;
    ensure(first.best_value >= 2.0 / 7.0 - 1e-9 && first.best_value < 1.0, || {
        format!("seed={} best_value={}", config.seed, first.best_value)
    })?;
    ensure(first.best_value >= first.tier_a_value - 1e-9, || {
        format!(
            "seed={} best_value={} tier_a_value={}",
            config.seed, first.best_value, first.tier_a_value
        )
    })?;
    let second = lift(tier_b_search(a, p, config))?;
    ensure(first == second, || {
        format!("seed={} repeated search differs", config.seed)
    })
}

const INVARIANTS: &[Invariant] = &[
    Invariant {
        module: "hyperbolic_core",
        name: "sigma_round_trip",
        run: sigma_round_trip,
    },
    Invariant {
        module: "hyperbolic_core",
        name: "sigma_inv_subadditive",
        run: sigma_inv_subadditive,
    },
    Invariant {
        module: "hyperbolic_core",
        name: "metric_axioms",
        run: metric_axioms,
    },
    Invariant {
        module: "hyperbolic_core",
        name: "mobius_invariance",
        run: mobius_invariance,
    },
    Invariant {
        module: "hyperbolic_core",
        name: "kobayashi_disc_is_poincare",
        run: kobayashi_disc,
    },
    Invariant {
        module: "rouche_counter",
        name: "monomial_counts",
        run: monomial_counts,
    },
    Invariant {
        module: "rouche_counter",
        name: "cubic_count",
        run: cubic_count,
    },
    Invariant {
        module: "rouche_counter",
        name: "rouche_consistency",
        run: rouche_consistency,
    },
    Invariant {
        module: "rouche_counter",
        name: "injective_maps_certified",
        run: injective_maps_certified,
    },
    Invariant {
        module: "rouche_counter",
        name: "non_injective_maps_not_certified",
        run: non_injective_maps_not_certified,
    },
    Invariant {
        module: "rouche_counter",
        name: "square_refuted",
        run: square_refuted,
    },
    Invariant {
        module: "symmetric_domains",
        name: "kubota_table",
        run: kubota_table,
    },
    Invariant {
        module: "symmetric_domains",
        name: "product_formula",
        run: product_formula,
    },
    Invariant {
        module: "symmetric_domains",
        name: "origin_and_star_shape",
        run: origin_and_star_shape,
    },
    Invariant {
        module: "symmetric_domains",
        name: "sandwich_typeI",
        run: sandwich,
    },
    Invariant {
        module: "planar_bounds",
        name: "annulus_golden_value",
        run: annulus_golden_value,
    },
    Invariant {
        module: "planar_bounds",
        name: "boundary_limit",
        run: boundary_limit,
    },
    Invariant {
        module: "planar_bounds",
        name: "reflection_symmetry",
        run: reflection_symmetry,
    },
    Invariant {
        module: "planar_bounds",
        name: "conjecture_increasing",
        run: conjecture_increasing,
    },
    Invariant {
        module: "planar_bounds",
        name: "punctured_ball_identity",
        run: punctured_ball_identity,
    },
    Invariant {
        module: "planar_bounds",
        name: "lipschitz_punctured_ball",
        run: lipschitz,
    },
    Invariant {
        module: "planar_bounds",
        name: "c_constant_range",
        run: c_constant_range,
    },
    Invariant {
        module: "planar_bounds",
        name: "krantz_far_region",
        run: krantz_far_region,
    },
    Invariant {
        module: "extremal_search",
        name: "tier_a_closed_form",
        run: tier_a_closed_form,
    },
    Invariant {
        module: "extremal_search",
        name: "tier_a_monotone",
        run: tier_a_monotone,
    },
    Invariant {
        module: "extremal_search",
        name: "search_containment",
        run: search_containment,
    },
];

impl Suite {
    fn module(self) -> Option<&'static str> {
        match self {
            Suite::Metrics => Some("hyperbolic_core"),
            Suite::Rouche => Some("rouche_counter"),
            Suite::Symmetric => Some("symmetric_domains"),
            Suite::Planar => Some("planar_bounds"),
            Suite::Search => Some("extremal_search"),
            Suite::All => None,
        }
    }
}

/// Runs a suite; exit status 1 if any invariant fails.
pub fn run(suite: Suite, seed: u64, out: &mut dyn Write) -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut total = 0;
    for inv in INVARIANTS
        .iter()
        .filter(|i| suite.module().is_none_or(|m| m == i.module))
    {
        total += 1;
        let line = match (inv.run)(&mut rng) {
            Ok(()) => format!("PASS {} {}", inv.module, inv.name),
            Err(witness) => {
                failures += 1;
                format!("FAIL {} {} {witness}", inv.module, inv.name)
            }
        };
        if writeln!(out, "{line}").is_err() {
            return ExitCode::FAILURE;
        }
    }
    let _ = writeln!(out, "{} of {total} invariants passed", total - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
