//! Exact rational weights, serialized as `"p/q"` strings.

use num_rational::Ratio;
use serde::{de::Error, Deserialize, Deserializer, Serializer};

pub type Rational = Ratio<i64>;

pub fn to_string(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse(s: &str) -> Result<Rational, String> {
    s.trim().parse::<Rational>().map_err(|e| format!("bad rational {s:?}: {e}"))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Raw {
    Int(i64),
    Str(String),
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw: Vec<Raw> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|r| match r {
                Raw::Int(i) => Ok(Rational::from_integer(i)),
                Raw::Str(s) => parse(&s).map_err(D::Error::custom),
            })
            .collect()
    }
}

pub mod map {
    use std::collections::BTreeMap;

    use super::*;

    pub fn serialize<S: Serializer>(m: &BTreeMap<String, Rational>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(m.iter().map(|(k, v)| (k, to_string(v))))
    }
}

pub mod single {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_string(v))
    }
}
