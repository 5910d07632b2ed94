//! Serde helpers: rationals travel as JSON integers when integral and as
//! `"p/q"` strings otherwise. Finite JSON floats are accepted on input and
//! converted exactly.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::{rational_from_f64, Rational, Scalar};

pub fn to_json(v: &Rational) -> serde_json::Value {
    if v.denom().is_one() {
        if let Some(i) = v.numer().to_i64() {
            return serde_json::Value::from(i);
        }
    }
    serde_json::Value::String(v.to_string())
}

pub fn from_json(v: &serde_json::Value) -> Result<Rational, String> {
    match v {
        serde_json::Value::Number(num) => {
            if let Some(i) = num.as_i64() {
                Ok(Rational::from_integer(BigInt::from(i)))
            } else if let Some(u) = num.as_u64() {
                Ok(Rational::from_integer(BigInt::from(u)))
            } else {
                let f = num.as_f64().ok_or("number out of range")?;
                rational_from_f64(f).map_err(|e| e.to_string())
            }
        }
        serde_json::Value::String(s) => Rational::parse_literal(s).ok_or_else(|| format!("invalid rational '{s}'")),
        other => Err(format!("expected a number or rational string, found {other}")),
    }
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        values.iter().map(to_json).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<serde_json::Value>::deserialize(d)?;
        raw.iter().map(|v| from_json(v).map_err(D::Error::custom)).collect()
    }
}
