//! Serialization helpers shared by every emitted record: exact rationals
//! travel as `p/q` strings.

use serde::Serializer;

use crate::numkit::Rational;

pub const SCHEMA_VERSION: u32 = 1;

pub fn ser_rational<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn ser_rationals<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

pub fn ser_opt_rational<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

/// Joins rationals with a separator, for CSV cells.
pub fn join_rationals<'a>(xs: impl IntoIterator<Item = &'a Rational>, sep: &str) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

pub fn ser_bigint<S: Serializer>(x: &crate::numkit::BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}
