//! Report helpers shared by the command line front end.

use num_rational::Rational64;
use serde::Serializer;

/// Exact rationals are written as `"p/q"` strings.
pub fn ser_ratio<S: Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}
