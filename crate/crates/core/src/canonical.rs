//! Fixed-precision number rendering.
//!
//! Machine-facing output (journal checksums, exports, service payloads) uses
//! exactly six fractional digits; human-facing output rounds half-up.

use std::str::FromStr;

use serde::{Serialize, Serializer};

/// Fractional digits of the canonical machine representation.
pub const CANONICAL_DECIMALS: usize = 6;

/// Renders `value` with exactly six fractional digits.
pub fn format6(value: f64) -> String {
    let s = format!("{value:.CANONICAL_DECIMALS$}");
    if s == "-0.000000" {
        "0.000000".to_owned()
    } else {
        s
    }
}

/// Rounds half away from zero to `decimals` places and renders the result.
pub fn display(value: f64, decimals: usize) -> String {
    let scale = 10f64.powi(decimals as i32);
    let rounded = (value * scale).round() / scale;
    let s = format!("{rounded:.decimals$}");
    if rounded == 0.0 && s.starts_with('-') {
        s[1..].to_owned()
    } else {
        s
    }
}

/// A float that serializes to JSON as a number literal with six fractional
/// digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Canonical(pub f64);

impl Serialize for Canonical {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let number = serde_json::Number::from_str(&format6(self.0)).map_err(serde::ser::Error::custom)?;
        number.serialize(serializer)
    }
}

/// `serialize_with` adapter for `f64` fields.
pub fn f6<S: Serializer>(value: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    Canonical(*value).serialize(serializer)
}

/// `serialize_with` adapter for `Option<f64>` fields.
pub fn opt_f6<S: Serializer>(value: &Option<f64>, serializer: S) -> Result<S::Ok, S::Error> {
    value.map(Canonical).serialize(serializer)
}
