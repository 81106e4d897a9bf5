//! Serde helpers for values that may be infinite.
//!
//! JSON has no infinity literal, so an unbounded threshold is written as the
//! string `"inf"`. Numbers, `"inf"`, `"infinity"` and `null` are all accepted
//! on input.

use serde::{de, Deserialize, Deserializer, Serializer};

#[derive(Deserialize)]
#[serde(untagged)]
enum Repr {
    Num(f64),
    Text(String),
}

pub fn parse_threshold(text: &str) -> Option<f64> {
    match text.trim().to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" | "∞" => Some(f64::INFINITY),
        other => other.parse::<f64>().ok(),
    }
}

pub mod threshold {
    use super::*;

    pub fn serialize<S: Serializer>(value: &f64, s: S) -> Result<S::Ok, S::Error> {
        if value.is_infinite() && *value > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*value)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Option::<Repr>::deserialize(d)? {
            None => Ok(f64::INFINITY),
            Some(Repr::Num(v)) => Ok(v),
            Some(Repr::Text(t)) => {
                parse_threshold(&t).ok_or_else(|| de::Error::custom(format!("invalid threshold {t:?}")))
            }
        }
    }
}

pub mod threshold_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(values: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            if v.is_infinite() && *v > 0.0 {
                seq.serialize_element("inf")?;
            } else {
                seq.serialize_element(v)?;
            }
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<Option<Repr>>::deserialize(d)?
            .into_iter()
            .map(|r| match r {
                None => Ok(f64::INFINITY),
                Some(Repr::Num(v)) => Ok(v),
                Some(Repr::Text(t)) => {
                    parse_threshold(&t).ok_or_else(|| de::Error::custom(format!("invalid threshold {t:?}")))
                }
            })
            .collect()
    }
}

/// Formats a threshold for CSV output: `inf` for unbounded values.
pub fn format_threshold(value: f64) -> String {
    if value.is_infinite() {
        "inf".to_string()
    } else {
        value.to_string()
    }
}
