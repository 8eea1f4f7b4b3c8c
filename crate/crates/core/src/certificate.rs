//! Tagged numerical results.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Whether a value is the squeezing function itself or a one-sided bound on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundTag {
    Exact,
    Lower,
    Upper,
}

impl fmt::Display for BoundTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundTag::Exact => "exact",
            BoundTag::Lower => "lower",
            BoundTag::Upper => "upper",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessValue {
    Number(f64),
    Text(String),
}

impl From<f64> for WitnessValue {
    fn from(v: f64) -> Self {
        WitnessValue::Number(v)
    }
}

impl From<&str> for WitnessValue {
    fn from(v: &str) -> Self {
        WitnessValue::Text(v.to_owned())
    }
}

impl From<String> for WitnessValue {
    fn from(v: String) -> Self {
        WitnessValue::Text(v)
    }
}

/// Parameters that witness a certificate, keyed by name (sorted, so output is stable).
pub type Witness = BTreeMap<String, WitnessValue>;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("certificate value {0} is outside (0, 1]")]
pub struct CertificateRangeError(pub f64);

/// A squeezing value or bound in `(0, 1]`, with the method that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    value: f64,
    tag: BoundTag,
    method: String,
    witness: Witness,
}

impl BoundCertificate {
    pub fn new(value: f64, tag: BoundTag, method: impl Into<String>) -> Result<Self, CertificateRangeError> {
        if value > 0.0 && value <= 1.0 {
            Ok(Self {
                value,
                tag,
                method: method.into(),
                witness: Witness::new(),
            })
        } else {
            Err(CertificateRangeError(value))
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<WitnessValue>) -> Self {
        self.witness.insert(key.to_owned(), value.into());
        self
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn tag(&self) -> BoundTag {
        self.tag
    }

    pub fn method(&self) -> &str {
        &self.method
    }

    pub fn witness(&self) -> &Witness {
        &self.witness
    }

    pub fn witness_text(&self, key: &str) -> Option<&str> {
        match self.witness.get(key) {
            Some(WitnessValue::Text(s)) => Some(s),
            _ => None,
        }
    }

    pub fn witness_number(&self, key: &str) -> Option<f64> {
        match self.witness.get(key) {
            Some(WitnessValue::Number(v)) => Some(*v),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_is_half_open() {
        assert!(BoundCertificate::new(1.0, BoundTag::Exact, "x").is_ok());
        assert!(BoundCertificate::new(1e-300, BoundTag::Lower, "x").is_ok());
        assert!(BoundCertificate::new(0.0, BoundTag::Lower, "x").is_err());
        assert!(BoundCertificate::new(1.0 + 1e-16 * 4.0, BoundTag::Upper, "x").is_err());
        assert!(BoundCertificate::new(f64::NAN, BoundTag::Upper, "x").is_err());
    }

    #[test]
    fn witness_lookup() {
        let c = BoundCertificate::new(0.5, BoundTag::Lower, "m")
            .unwrap()
            .with("branch", "direct")
            .with("rho", 0.7);
        assert_eq!(c.witness_text("branch"), Some("direct"));
        assert_eq!(c.witness_number("rho"), Some(0.7));
        assert_eq!(c.witness_number("branch"), None);
    }
}
