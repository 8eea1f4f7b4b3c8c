//! Domain descriptors and point lists.
//!
//! ```text
//! typeI:r,s | typeII:p | typeIII:q | typeIV:n | ball:n | punctured-ball:n | product:<desc>+<desc>+...
//! ```

use num_complex::Complex64;
use squeeze_core::symmetric::ClassicalDomainSpec;

use crate::InputError;

#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Classical(ClassicalDomainSpec),
    Ball(usize),
    PuncturedBall(usize),
    Product(Vec<ClassicalDomainSpec>),
}

fn parse_count(token: &str, whole: &str) -> Result<usize, InputError> {
    token
        .trim()
        .parse::<usize>()
        .map_err(|_| InputError(format!("invalid integer '{token}' in domain descriptor '{whole}'")))
}

fn parse_factor(desc: &str, whole: &str) -> Result<Domain, InputError> {
    let (kind, params) = desc
        .split_once(':')
        .ok_or_else(|| InputError(format!("missing ':' in domain descriptor '{desc}'")))?;
    let invalid = |e: squeeze_core::symmetric::SymmetricError| InputError(format!("'{desc}': {e}"));
    Ok(match kind {
        "typeI" => {
            let (r, s) = params
                .split_once(',')
                .ok_or_else(|| InputError(format!("typeI needs 'r,s', got '{params}' in '{whole}'")))?;
            Domain::Classical(
                ClassicalDomainSpec::type_i(parse_count(r, whole)?, parse_count(s, whole)?).map_err(invalid)?,
            )
        }
        "typeII" => Domain::Classical(ClassicalDomainSpec::type_ii(parse_count(params, whole)?).map_err(invalid)?),
        "typeIII" => Domain::Classical(ClassicalDomainSpec::type_iii(parse_count(params, whole)?).map_err(invalid)?),
        "typeIV" => Domain::Classical(ClassicalDomainSpec::type_iv(parse_count(params, whole)?).map_err(invalid)?),
        "ball" | "punctured-ball" => {
            let n = parse_count(params, whole)?;
            if n == 0 {
                return Err(InputError(format!("dimension '0' in '{desc}' must be positive")));
            }
            if kind == "ball" {
                Domain::Ball(n)
            } else {
                Domain::PuncturedBall(n)
            }
        }
        other => return Err(InputError(format!("unknown domain kind '{other}' in '{whole}'"))),
    })
}

pub fn parse_domain(desc: &str) -> Result<Domain, InputError> {
    if let Some(rest) = desc.strip_prefix("product:") {
        let factors = rest
            .split('+')
            .map(|f| match parse_factor(f, desc)? {
                Domain::Classical(spec) => Ok(spec),
                // Bⁿ is D_I(1, n)
                Domain::Ball(n) => Ok(ClassicalDomainSpec::type_i(1, n).expect("n ≥ 1")),
                _ => Err(InputError(format!(
                    "factor '{f}' of '{desc}' is not a classical domain"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(Domain::Product(factors));
    }
    parse_factor(desc, desc)
}

fn parse_reals(text: &str) -> Result<Vec<f64>, InputError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| InputError(format!("invalid number '{t}' in point '{text}'")))
        })
        .collect()
}

/// A point of `ℂⁿ`: `2n` numbers are `re,im` pairs, `n` numbers are real
/// coordinates.
pub fn parse_point(text: &str, dimension: usize) -> Result<Vec<Complex64>, InputError> {
    let values = parse_reals(text)?;
    if values.len() == 2 * dimension {
        Ok(values.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect())
    } else if values.len() == dimension {
        Ok(values.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    } else {
        Err(InputError(format!(
            "point '{text}' has {} numbers; expected {} (re,im pairs) or {dimension} (real coordinates)",
            values.len(),
            2 * dimension
        )))
    }
}

/// `;`-separated points of `ℂⁿ`.
pub fn parse_points(text: &str, dimension: usize) -> Result<Vec<Vec<Complex64>>, InputError> {
    text.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_point(t, dimension))
        .collect()
}

/// `u,v,w` for the c-constant.
pub fn parse_triple(text: &str) -> Result<(f64, f64, f64), InputError> {
    match parse_reals(text)?.as_slice() {
        [u, v, w] => Ok((*u, *v, *w)),
        other => Err(InputError(format!(
            "expected 'u,v,w', got {} numbers in '{text}'",
            other.len()
        ))),
    }
}
