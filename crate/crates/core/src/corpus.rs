//! Fixed maps with known zero counts and known (non-)injectivity, used by the
//! verification suites.

use num_complex::Complex64;

use crate::planar::AnnulusSpec;
use crate::rouche::{annulus_boundary, CircleContour};
use crate::search::LaurentPolynomial;

/// A pair `(f, g)` on a contour set, with the expected dominance outcome.
#[derive(Debug, Clone)]
pub struct DominanceCase {
    pub name: &'static str,
    pub f: LaurentPolynomial,
    pub g: LaurentPolynomial,
    pub contours: Vec<CircleContour>,
    pub dominates: bool,
}

/// A map on an annulus together with whether it is injective there.
#[derive(Debug, Clone)]
pub struct InjectivityCase {
    pub name: &'static str,
    pub map: LaurentPolynomial,
    pub annulus: AnnulusSpec,
    pub injective: bool,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Laurent polynomial from `(power, coefficient)` terms.
fn laurent(terms: &[(i32, f64)]) -> LaurentPolynomial {
    let degree = terms.iter().map(|(k, _)| k.unsigned_abs() as usize).max().unwrap_or(0);
    let mut coefficients = vec![c(0.0); 2 * degree + 1];
    for &(k, v) in terms {
        coefficients[(k + degree as i32) as usize] += c(v);
    }
    LaurentPolynomial::new(coefficients).expect("corpus degrees are at most 4")
}

fn unit_circle() -> Vec<CircleContour> {
    vec![CircleContour::centered(1.0, 256).expect("valid contour")]
}

fn annulus(r: f64) -> AnnulusSpec {
    AnnulusSpec::new(r).expect("valid annulus")
}

fn annulus_contours(r: f64) -> Vec<CircleContour> {
    annulus_boundary(annulus(r), 256).expect("valid contours").to_vec()
}

pub fn dominance_corpus() -> Vec<DominanceCase> {
    vec![
        DominanceCase {
            name: "z^3 vs 0.5z",
            f: laurent(&[(3, 1.0)]),
            g: laurent(&[(1, 0.5)]),
            contours: unit_circle(),
            dominates: true,
        },
        DominanceCase {
            name: "z vs 2z",
            f: laurent(&[(1, 1.0)]),
            g: laurent(&[(1, 2.0)]),
            contours: unit_circle(),
            dominates: false,
        },
        DominanceCase {
            name: "z^2 vs 0",
            f: laurent(&[(2, 1.0)]),
            g: laurent(&[(0, 0.0)]),
            contours: unit_circle(),
            dominates: true,
        },
        DominanceCase {
            name: "z^4 + 0.1 vs 0.3z^2",
            f: laurent(&[(4, 1.0), (0, 0.1)]),
            g: laurent(&[(2, 0.3)]),
            contours: unit_circle(),
            dominates: true,
        },
        DominanceCase {
            name: "z - 0.2 vs 0.5z^2",
            f: laurent(&[(1, 1.0), (0, -0.2)]),
            g: laurent(&[(2, 0.5)]),
            contours: unit_circle(),
            dominates: true,
        },
        DominanceCase {
            name: "z vs 0.2 on A_0.5",
            f: laurent(&[(1, 1.0)]),
            g: laurent(&[(0, 0.2)]),
            contours: annulus_contours(0.5),
            dominates: true,
        },
        DominanceCase {
            name: "z - 0.6 vs 0.1z^2 on A_0.25",
            f: laurent(&[(1, 1.0), (0, -0.6)]),
            g: laurent(&[(2, 0.1)]),
            contours: annulus_contours(0.25),
            dominates: true,
        },
        DominanceCase {
            name: "z - 0.6 vs 0.5 on A_0.25",
            f: laurent(&[(1, 1.0), (0, -0.6)]),
            g: laurent(&[(0, 0.5)]),
            contours: annulus_contours(0.25),
            dominates: false,
        },
    ]
}

/// Maps known to be injective on their annulus.
pub fn injective_corpus() -> Vec<InjectivityCase> {
    vec![
        InjectivityCase {
            name: "z on A_0.5",
            map: laurent(&[(1, 1.0)]),
            annulus: annulus(0.5),
            injective: true,
        },
        InjectivityCase {
            name: "0.25/z on A_0.25",
            map: laurent(&[(-1, 0.25)]),
            annulus: annulus(0.25),
            injective: true,
        },
        InjectivityCase {
            name: "0.5z + 0.3 on A_0.5",
            map: laurent(&[(1, 0.5), (0, 0.3)]),
            annulus: annulus(0.5),
            injective: true,
        },
        // (a − b)(1 + 0.1(a + b)) = 0 forces a = b inside the unit disc
        InjectivityCase {
            name: "(z + 0.1z^2)/1.1 on A_0.5",
            map: laurent(&[(1, 1.0 / 1.1), (2, 0.1 / 1.1)]),
            annulus: annulus(0.5),
            injective: true,
        },
        // (a − b)(1 + 0.05/(ab)) = 0 needs |ab| = 0.05 < 0.25
        InjectivityCase {
            name: "(z - 0.05/z)/1.1 on A_0.5",
            map: laurent(&[(1, 1.0 / 1.1), (-1, -0.05 / 1.1)]),
            annulus: annulus(0.5),
            injective: true,
        },
    ]
}

/// Maps known to take some value twice on their annulus.
pub fn refutation_corpus() -> Vec<InjectivityCase> {
    vec![
        InjectivityCase {
            name: "z^2 on A_0.5",
            map: laurent(&[(2, 1.0)]),
            annulus: annulus(0.5),
            injective: false,
        },
        InjectivityCase {
            name: "z^3 on A_0.5",
            map: laurent(&[(3, 1.0)]),
            annulus: annulus(0.5),
            injective: false,
        },
        // z and r/z share an image; critical point √r = 0.5 lies inside
        InjectivityCase {
            name: "0.8(z + 0.25/z) on A_0.25",
            map: laurent(&[(1, 0.8), (-1, 0.2)]),
            annulus: annulus(0.25),
            injective: false,
        },
        // critical point √0.3 inside A_0.25
        InjectivityCase {
            name: "0.7(z + 0.3/z) on A_0.25",
            map: laurent(&[(1, 0.7), (-1, 0.21)]),
            annulus: annulus(0.25),
            injective: false,
        },
        InjectivityCase {
            name: "z^2 + 0.1z on A_0.5",
            map: laurent(&[(2, 1.0), (1, 0.1)]),
            annulus: annulus(0.5),
            injective: false,
        },
    ]
}
