//! `exact`, `bound`, `search` and `table`.

use std::fmt::Display;
use std::io::{self, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use squeeze_core::certificate::{BoundCertificate, BoundTag, Witness, WitnessValue};
use squeeze_core::hyperbolic::{BallPoint, DiscPoint};
use squeeze_core::planar::{
    annulus_conjectured_value, annulus_lower_bound, c_constant, caratheodory_lower_estimate,
    excised_domain_lower_bound, punctured_upper_bound, AnnulusSpec, ExcisedDiscDomainSpec, Excision, PlanarDomain,
    PuncturedDomainSpec,
};
use squeeze_core::search::{tier_b_search, SearchConfig, SearchResult, DEFAULT_BOUNDARY_SAMPLES};
use squeeze_core::symmetric::{
    contains, kubota_constant, product_constant, punctured_ball_squeezing, ClassicalDomainSpec, MatrixPoint,
};

use crate::parse::{parse_domain, parse_point, parse_points, parse_triple, Domain};
use crate::record::{emit_records, json_number, point_repr, write_csv, OutFormat, ResultRecord, TOOL_VERSION};
use crate::{BoundArgs, ExactArgs, InputError, SearchArgs, TableArgs};

pub const SAMPLES_VAR: &str = "SQUEEZE_SAMPLES";

#[derive(Debug)]
pub enum Failure {
    Input(InputError),
    Io(io::Error),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<(), Failure>;

fn fail<T, E: Display>(result: Result<T, E>, context: &str) -> Result<T, InputError> {
    result.map_err(|e| InputError(format!("{context}: {e}")))
}

fn annulus(r: f64) -> Result<AnnulusSpec, InputError> {
    fail(AnnulusSpec::new(r), &format!("--annulus {r}"))
}

/// The planar point given by `--rho` or `--point`.
fn planar_point(rho: Option<f64>, point: Option<&str>) -> Result<Complex64, InputError> {
    match (rho, point) {
        (Some(rho), None) => Ok(Complex64::new(rho, 0.0)),
        (None, Some(text)) => Ok(parse_point(text, 1)?[0]),
        _ => Err(InputError("exactly one of --rho and --point is required".into())),
    }
}

fn require_point<'a>(point: &'a Option<String>, what: &str) -> Result<&'a str, InputError> {
    point
        .as_deref()
        .ok_or_else(|| InputError(format!("{what} needs --point")))
}

fn ball_point(text: &str, n: usize) -> Result<BallPoint, InputError> {
    fail(BallPoint::new(parse_point(text, n)?), &format!("point '{text}'"))
}

fn check_member(spec: ClassicalDomainSpec, coords: &[Complex64], text: &str) -> Result<(), InputError> {
    let point = fail(MatrixPoint::from_coordinates(spec, coords), &format!("point '{text}'"))?;
    if fail(contains(spec, &point), &format!("point '{text}'"))? {
        Ok(())
    } else {
        Err(InputError(format!("point '{text}' is not in {spec}")))
    }
}

pub fn exact(args: &ExactArgs, out: OutFormat, stdout: &mut dyn Write) -> Outcome {
    let domain = parse_domain(&args.domain)?;
    let mut point = None;
    let cert = match &domain {
        Domain::Classical(spec) => {
            if let Some(text) = &args.point {
                let coords = parse_point(text, spec.complex_dimension())?;
                check_member(*spec, &coords, text)?;
                point = Some(coords);
            }
            fail(kubota_constant(*spec), &args.domain)?
        }
        Domain::Product(specs) => {
            if let Some(text) = &args.point {
                let total = specs.iter().map(ClassicalDomainSpec::complex_dimension).sum();
                let coords = parse_point(text, total)?;
                let mut rest = coords.as_slice();
                for spec in specs {
                    let (head, tail) = rest.split_at(spec.complex_dimension());
                    check_member(*spec, head, text)?;
                    rest = tail;
                }
                point = Some(coords);
            }
            fail(product_constant(specs), &args.domain)?
        }
        Domain::Ball(n) => {
            if let Some(text) = &args.point {
                point = Some(ball_point(text, *n)?.coords().to_vec());
            }
            fail(BoundCertificate::new(1.0, BoundTag::Exact, "unit-ball"), &args.domain)?.with("dimension", *n as f64)
        }
        Domain::PuncturedBall(n) => {
            let text = require_point(&args.point, &args.domain)?;
            let z = ball_point(text, *n)?;
            point = Some(z.coords().to_vec());
            fail(punctured_ball_squeezing(&z), &format!("point '{text}'"))?
        }
    };
    let record = ResultRecord::from_certificate(args.domain.as_str(), point.as_deref(), &cert);
    Ok(emit_records(stdout, &[record], out)?)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExcisedConfig {
    u: f64,
    v: f64,
    w: f64,
    excisions: Vec<ExcisionEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExcisionEntry {
    a_re: f64,
    a_im: f64,
    r: f64,
}

fn load_excised(path: &Path) -> Result<ExcisedDiscDomainSpec, InputError> {
    let where_ = path.display().to_string();
    let text = fail(std::fs::read_to_string(path), &where_)?;
    let config: ExcisedConfig = fail(serde_json::from_str(&text), &where_)?;
    let excisions = config
        .excisions
        .iter()
        .enumerate()
        .map(|(i, e)| {
            Ok(Excision {
                center: fail(
                    DiscPoint::from_re_im(e.a_re, e.a_im),
                    &format!("{where_}: excision {i}"),
                )?,
                radius: e.r,
            })
        })
        .collect::<Result<Vec<_>, InputError>>()?;
    fail(
        ExcisedDiscDomainSpec::new(config.u, config.v, config.w, excisions),
        &where_,
    )
}

fn annulus_descriptor(r: f64) -> String {
    format!("annulus:{}", json_number(r))
}

pub fn bound(args: &BoundArgs, out: OutFormat, stdout: &mut dyn Write) -> Outcome {
    let record = if let Some(r) = args.annulus {
        let a = annulus(r)?;
        let z = planar_point(args.rho, args.point.as_deref())?;
        let domain = annulus_descriptor(r);
        let here = format!("point {z} of A_{r}");
        let lower = fail(annulus_lower_bound(a, z), &here)?;
        if args.conjecture {
            let folded = a.fold(z.norm());
            let cert = fail(annulus_conjectured_value(a, folded.rho), &here)?;
            ResultRecord::from_certificate(domain, Some(&[z]), &cert)
        } else if args.caratheodory {
            let value = fail(
                caratheodory_lower_estimate(PlanarDomain::Annulus(a), z, lower.value()),
                &here,
            )?;
            let mut witness = Witness::new();
            witness.insert("r".into(), WitnessValue::Number(r));
            witness.insert("squeezing_lower".into(), WitnessValue::Number(lower.value()));
            witness.insert("boundary_distance".into(), WitnessValue::Number(a.boundary_distance(z)));
            ResultRecord {
                domain,
                point: Some(point_repr(&[z])),
                value,
                tag: BoundTag::Lower,
                method: "caratheodory-koebe".into(),
                witness,
                tool_version: TOOL_VERSION,
            }
        } else {
            ResultRecord::from_certificate(domain, Some(&[z]), &lower)
        }
    } else if let Some(n) = args.punctured_ball {
        let spec = punctured_spec(n, args.punctures.as_deref(), false)?;
        let text = require_point(&args.point, "--punctured-ball")?;
        let z = ball_point(text, n)?;
        let cert = fail(punctured_upper_bound(&spec, &z), &format!("point '{text}'"))?;
        ResultRecord::from_certificate(format!("punctured-ball:{n}"), Some(z.coords()), &cert)
    } else if let Some(path) = &args.excised {
        let domain = load_excised(path)?;
        let text = require_point(&args.point, "--excised")?;
        let z = parse_point(text, 1)?[0];
        let cert = fail(excised_domain_lower_bound(&domain, z), &format!("point '{text}'"))?;
        ResultRecord::from_certificate(format!("excised:{}", path.display()), Some(&[z]), &cert)
    } else if let Some(text) = &args.c_constant {
        let (u, v, w) = parse_triple(text)?;
        let value = fail(c_constant(u, v, w), &format!("--c-constant {text}"))?;
        let cert = fail(BoundCertificate::new(value, BoundTag::Lower, "c-constant"), text)?
            .with("u", u)
            .with("v", v)
            .with("w", w);
        ResultRecord::from_certificate(format!("c-constant:{text}"), None, &cert)
    } else {
        unreachable!("clap requires one target")
    };
    Ok(emit_records(stdout, &[record], out)?)
}

/// Punctures from `;`-separated points; `default_origin` supplies `{0}` when none are given.
fn punctured_spec(n: usize, punctures: Option<&str>, default_origin: bool) -> Result<PuncturedDomainSpec, InputError> {
    if n == 0 {
        return Err(InputError("--punctured-ball dimension '0' must be positive".into()));
    }
    let points = match punctures {
        Some(text) => parse_points(text, n)?
            .into_iter()
            .map(|p| fail(BallPoint::new(p), &format!("puncture in '{text}'")))
            .collect::<Result<Vec<_>, _>>()?,
        None if default_origin => vec![fail(BallPoint::origin(n), "origin")?],
        None => Vec::new(),
    };
    fail(PuncturedDomainSpec::new(n, points), "--punctures")
}

fn boundary_samples() -> Result<usize, InputError> {
    match std::env::var(SAMPLES_VAR) {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| InputError(format!("{SAMPLES_VAR}='{text}' is not a non-negative integer"))),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_BOUNDARY_SAMPLES),
        Err(e) => Err(InputError(format!("{SAMPLES_VAR}: {e}"))),
    }
}

#[derive(Serialize)]
struct SearchRecord<'a> {
    domain: String,
    point: Vec<[f64; 2]>,
    value: f64,
    tag: BoundTag,
    method: &'static str,
    witness: Witness,
    #[serde(flatten)]
    result: &'a SearchResult,
    tool_version: &'static str,
}

const SEARCH_CSV_HEADER: [&str; 16] = [
    "domain",
    "point",
    "value",
    "tag",
    "method",
    "witness",
    "best_value",
    "tier_a_value",
    "conjecture_value",
    "conjecture_gap",
    "evaluations",
    "seed",
    "boundary_samples",
    "status",
    "best_candidate",
    "tool_version",
];

fn json<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

pub fn search(args: &SearchArgs, seed: u64, out: OutFormat, stdout: &mut dyn Write) -> Outcome {
    let a = annulus(args.annulus)?;
    let z = planar_point(args.rho, args.point.as_deref())?;
    let config = SearchConfig {
        degree: args.degree,
        budget: args.budget,
        seed,
        boundary_samples: boundary_samples()?,
        certificate_grid: args.grid,
    };
    let result = fail(tier_b_search(a, z, config), "search")?;
    let mut witness = Witness::new();
    witness.insert("degree".into(), WitnessValue::Number(args.degree as f64));
    witness.insert("budget".into(), WitnessValue::Number(args.budget as f64));
    witness.insert("certificate_grid".into(), WitnessValue::Number(args.grid as f64));
    let rec = SearchRecord {
        domain: annulus_descriptor(args.annulus),
        point: point_repr(&[z]),
        value: result.best_value,
        tag: BoundTag::Lower,
        method: "extremal-search",
        witness,
        result: &result,
        tool_version: TOOL_VERSION,
    };
    match out {
        OutFormat::Json => writeln!(stdout, "{}", json(&rec))?,
        OutFormat::Csv => {
            let row = [
                rec.domain.clone(),
                json(&rec.point),
                json_number(rec.value),
                rec.tag.to_string(),
                rec.method.to_owned(),
                json(&rec.witness),
                json_number(result.best_value),
                json_number(result.tier_a_value),
                json_number(result.conjecture_value),
                json_number(result.conjecture_gap),
                result.evaluations.to_string(),
                result.seed.to_string(),
                result.boundary_samples.to_string(),
                json(&result.status).trim_matches('"').to_owned(),
                json(&result.best_candidate),
                TOOL_VERSION.to_owned(),
            ];
            write_csv(stdout, &SEARCH_CSV_HEADER, [row])?;
        }
    }
    Ok(())
}

pub fn table(args: &TableArgs, out: OutFormat, stdout: &mut dyn Write) -> Outcome {
    let n = args.samples;
    if n < 2 {
        return Err(InputError(format!("--samples {n}: a table needs at least 2 rows")).into());
    }
    if let Some(r) = args.annulus {
        let a = annulus(r)?;
        let start = a.fundamental_start();
        let mut rows = Vec::with_capacity(n);
        let mut records = Vec::with_capacity(2 * n);
        for i in 0..n {
            let rho = start + i as f64 * (1.0 - start) / n as f64;
            let z = Complex64::new(rho, 0.0);
            let here = format!("rho {rho}");
            let lower = fail(annulus_lower_bound(a, z), &here)?;
            let conjecture = fail(annulus_conjectured_value(a, rho), &here)?;
            rows.push([
                json_number(rho),
                json_number(lower.value()),
                json_number(conjecture.value()),
            ]);
            let domain = annulus_descriptor(r);
            records.push(ResultRecord::from_certificate(domain.clone(), Some(&[z]), &lower));
            records.push(ResultRecord::from_certificate(domain, Some(&[z]), &conjecture));
        }
        match out {
            OutFormat::Csv => write_csv(stdout, &["rho", "lower_bound", "conjecture"], rows)?,
            OutFormat::Json => emit_records(stdout, &records, out)?,
        }
    } else if let Some(dim) = args.punctured_ball {
        let spec = punctured_spec(dim, args.punctures.as_deref(), true)?;
        let mut rows = Vec::with_capacity(n);
        let mut records = Vec::with_capacity(n);
        for i in 0..n {
            let rho = (i + 1) as f64 / (n + 1) as f64;
            let mut coords = vec![Complex64::new(0.0, 0.0); dim];
            coords[0] = Complex64::new(rho, 0.0);
            let z = fail(BallPoint::new(coords), "table point")?;
            let upper = fail(punctured_upper_bound(&spec, &z), &format!("rho {rho}"))?;
            rows.push([json_number(rho), json_number(upper.value())]);
            records.push(ResultRecord::from_certificate(
                format!("punctured-ball:{dim}"),
                Some(z.coords()),
                &upper,
            ));
        }
        match out {
            OutFormat::Csv => write_csv(stdout, &["rho", "upper_bound"], rows)?,
            OutFormat::Json => emit_records(stdout, &records, out)?,
        }
    }
    Ok(())
}
