//! Decimal-string wrappers so integers and rationals of any size survive JSON.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::parse_rational;

/// A big integer carried as a decimal string; plain JSON integers are also accepted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecInt(pub BigInt);

/// A rational carried as `"num/den"` (or `"n"`); decimals and JSON numbers are accepted on input.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecRat(pub BigRational);

impl Serialize for DecInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl Serialize for DecRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

struct NumberOrString;

impl<'de> Visitor<'de> for NumberOrString {
    type Value = String;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a number or a decimal string")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<String, E> {
        Ok(v.to_owned())
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<String, E> {
        Ok(v.to_string())
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<String, E> {
        Ok(v.to_string())
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<String, E> {
        Ok(v.to_string())
    }
}

impl<'de> Deserialize<'de> for DecInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = d.deserialize_any(NumberOrString)?;
        s.trim()
            .parse()
            .map(DecInt)
            .map_err(|_| de::Error::custom(format!("not an integer: {s:?}")))
    }
}

impl<'de> Deserialize<'de> for DecRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = d.deserialize_any(NumberOrString)?;
        parse_rational(&s).map(DecRat).map_err(de::Error::custom)
    }
}

impl From<BigInt> for DecInt {
    fn from(v: BigInt) -> Self {
        DecInt(v)
    }
}

impl From<BigRational> for DecRat {
    fn from(v: BigRational) -> Self {
        DecRat(v)
    }
}

pub fn ints(v: &[BigInt]) -> Vec<DecInt> {
    v.iter().cloned().map(DecInt).collect()
}

pub fn unwrap_ints(v: Vec<DecInt>) -> Vec<BigInt> {
    v.into_iter().map(|d| d.0).collect()
}
