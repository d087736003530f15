//! Decimal-string encodings for big numbers in JSON output.

use rug::{Float, Integer};
use serde::Serializer;

pub(crate) fn integer_as_string<S: Serializer>(v: &Integer, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Shortest decimal string that parses back to the same value at the same precision.
pub fn float_to_decimal(v: &Float) -> String {
    v.to_string_radix(10, None)
}

pub fn float_from_decimal(s: &str, prec: u32) -> Result<Float, crate::error::Error> {
    Float::parse(s)
        .map(|p| Float::with_val(prec, p))
        .map_err(|e| crate::error::Error::Parse {
            what: "decimal float",
            detail: format!("{s:?}: {e}"),
        })
}

pub(crate) fn float_as_string<S: Serializer>(v: &Float, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&float_to_decimal(v))
}

pub(crate) fn floats_as_strings<S: Serializer>(v: &[Float], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(float_to_decimal))
}
