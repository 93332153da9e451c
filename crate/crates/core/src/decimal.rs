//! Serde helpers that render big integers as decimal strings, so JSON
//! consumers never see digit vectors or lose precision to doubles.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::ser::SerializeMap;
use serde::Serializer;

pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

pub fn serialize_opt<S: Serializer>(x: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.collect_str(x),
        None => s.serialize_none(),
    }
}

/// Map with integer keys and big-integer values, both as strings.
pub fn serialize_map<S: Serializer>(m: &BTreeMap<usize, BigUint>, s: S) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(&k.to_string(), &v.to_string())?;
    }
    map.end()
}
