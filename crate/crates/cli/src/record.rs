//! Output records and their JSON / CSV encodings.
//!
//! Floats are always written by `serde_json` (shortest round-trip form), so
//! the JSON and CSV encodings of one record carry the same digits.

use std::io::{self, Write};

use num_complex::Complex64;
use serde::Serialize;
use squeeze_core::certificate::{BoundCertificate, BoundTag, Witness};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    pub domain: String,
    /// `[re, im]` per complex coordinate; `null` for pointwise-constant values.
    pub point: Option<Vec<[f64; 2]>>,
    pub value: f64,
    pub tag: BoundTag,
    pub method: String,
    pub witness: Witness,
    pub tool_version: &'static str,
}

pub fn point_repr(point: &[Complex64]) -> Vec<[f64; 2]> {
    point.iter().map(|z| [z.re, z.im]).collect()
}

impl ResultRecord {
    pub fn from_certificate(domain: impl Into<String>, point: Option<&[Complex64]>, cert: &BoundCertificate) -> Self {
        Self {
            domain: domain.into(),
            point: point.map(point_repr),
            value: cert.value(),
            tag: cert.tag(),
            method: cert.method().to_owned(),
            witness: cert.witness().clone(),
            tool_version: TOOL_VERSION,
        }
    }
}

pub fn json_number(v: f64) -> String {
    serde_json::to_string(&v).expect("numbers serialize")
}

pub const RECORD_CSV_HEADER: [&str; 7] = ["domain", "point", "value", "tag", "method", "witness", "tool_version"];

pub fn record_csv_fields(r: &ResultRecord) -> [String; 7] {
    [
        r.domain.clone(),
        serde_json::to_string(&r.point).expect("points serialize"),
        json_number(r.value),
        r.tag.to_string(),
        r.method.clone(),
        serde_json::to_string(&r.witness).expect("witness serializes"),
        r.tool_version.to_owned(),
    ]
}

/// Writes a header and rows as CSV.
pub fn write_csv<R, I>(out: &mut dyn Write, header: &[&str], rows: I) -> io::Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()
}

pub fn emit_records(out: &mut dyn Write, records: &[ResultRecord], format: OutFormat) -> io::Result<()> {
    match format {
        OutFormat::Json => {
            for r in records {
                writeln!(out, "{}", serde_json::to_string(r).expect("records serialize"))?;
            }
            Ok(())
        }
        OutFormat::Csv => write_csv(out, &RECORD_CSV_HEADER, records.iter().map(record_csv_fields)),
    }
}
