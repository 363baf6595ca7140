//! Text encoding of scalars shared by every JSON document the crate emits.
//!
//! Exact entries are written as decimal integers (`"-5"`) or reduced
//! fractions (`"7/3"`); floats use Rust's shortest round-trip formatting.

use std::path::Path;

use serde::de::DeserializeOwned;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub fn parse_scalar<T: Scalar>(text: &str) -> Result<T> {
    let trimmed = text.trim();
    if let Some((_, den)) = trimmed.split_once('/') {
        if den.trim().trim_start_matches(['+', '-']).chars().all(|c| c == '0') {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
    }
    trimmed
        .parse::<T>()
        .map_err(|_| Error::Parse(format!("invalid scalar {text:?}")))
}

pub fn from_str<D: DeserializeOwned>(text: &str) -> Result<D> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_file<D: DeserializeOwned>(path: &Path) -> Result<D> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    from_str(&text)
}

/// `#[serde(with = "scalar_str")]` for a single scalar stored as a string.
pub mod scalar_str {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::scalar::Scalar;

    pub fn serialize<T: Scalar, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T: Scalar, D: Deserializer<'de>>(d: D) -> Result<T, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_scalar(&text).map_err(D::Error::custom)
    }
}

/// `#[serde(with = "scalar_vec_str")]` for a list of scalars stored as strings.
pub mod scalar_vec_str {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::scalar::Scalar;

    pub fn serialize<T: Scalar, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(ToString::to_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, T: Scalar, D: Deserializer<'de>>(d: D) -> Result<Vec<T>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| super::parse_scalar(t).map_err(D::Error::custom))
            .collect()
    }
}
