//! Serde helpers for exact numbers: integers that fit in `i64` become JSON
//! numbers, everything else a decimal string; rationals are `"p/q"` strings
//! unless integral.

use std::collections::BTreeMap;
use std::fmt::Display;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Deserialize, Deserializer, Serializer};

pub fn int<I: ToPrimitive + Display, S: Serializer>(v: &I, s: S) -> Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(x) => s.serialize_i64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

pub fn int_vec<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&IntRef(x))?;
    }
    seq.end()
}

pub fn int_map<S: Serializer>(v: &BTreeMap<usize, BigInt>, s: S) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(v.len()))?;
    for (k, x) in v {
        map.serialize_entry(&k.to_string(), &IntRef(x))?;
    }
    map.end()
}

struct IntRef<'a>(&'a BigInt);

impl serde::Serialize for IntRef<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        int(self.0, s)
    }
}

pub fn rational_string(v: &BigRational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn rational<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    if v.is_integer() {
        int(v.numer(), s)
    } else {
        s.serialize_str(&rational_string(v))
    }
}

pub fn rational_vec<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&RatRef(x))?;
    }
    seq.end()
}

struct RatRef<'a>(&'a BigRational);

impl serde::Serialize for RatRef<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        rational(self.0, s)
    }
}

/// Parses `"p/q"`, `"p"`, or a JSON integer.
pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let text = text.trim();
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n: BigInt = n
        .parse()
        .map_err(|_| format!("bad numerator in {text:?}"))?;
    let d: BigInt = d
        .parse()
        .map_err(|_| format!("bad denominator in {text:?}"))?;
    if d == BigInt::from(0) {
        return Err(format!("zero denominator in {text:?}"));
    }
    Ok(BigRational::new(n, d))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawNumber {
    Int(i64),
    Text(String),
}

impl RawNumber {
    fn into_rational(self) -> Result<BigRational, String> {
        match self {
            RawNumber::Int(v) => Ok(BigRational::from_integer(v.into())),
            RawNumber::Text(t) => parse_rational(&t),
        }
    }
}

pub fn de_rational<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
    RawNumber::deserialize(d)?
        .into_rational()
        .map_err(serde::de::Error::custom)
}

pub fn de_rational_vec<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
    Vec::<RawNumber>::deserialize(d)?
        .into_iter()
        .map(RawNumber::into_rational)
        .collect::<Result<_, _>>()
        .map_err(serde::de::Error::custom)
}
