//! Serde helpers writing [`BigInt`] as plain JSON numbers of any size.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};
use serde_json::Number;

pub fn number(v: &BigInt) -> Number {
    Number::from_str(&v.to_string()).expect("decimal integer is a JSON number")
}

pub fn int<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    number(v).serialize(s)
}

pub fn opt_int<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => number(v).serialize(s),
        None => s.serialize_none(),
    }
}
