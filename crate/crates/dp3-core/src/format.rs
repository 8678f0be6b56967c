//! Fixed-precision number formatting for JSON and CSV output.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// Significant digits of JSON numbers.
pub const JSON_DIGITS: usize = 17;
/// Significant digits of CSV numbers.
pub const CSV_DIGITS: usize = 12;

fn sig(x: f64, digits: usize) -> String {
    format!("{:.*e}", digits - 1, x)
}

/// JSON token for `x`: 17 significant digits, `null` if not finite.
pub fn json_number(x: f64) -> String {
    if x.is_finite() {
        sig(x, JSON_DIGITS)
    } else {
        "null".to_string()
    }
}

pub fn csv_number(x: f64) -> String {
    sig(x, CSV_DIGITS)
}

/// An `f64` that serializes through [`json_number`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(json_number(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_digits() {
        let x = 0.1f64 + 0.2;
        let s = json_number(x);
        assert_eq!(s.parse::<f64>().unwrap(), x);
        assert_eq!(csv_number(1.5), "1.50000000000e0");
        assert_eq!(json_number(f64::NAN), "null");
        let v = serde_json::to_string(&vec![Num(2.0), Num(f64::INFINITY)]).unwrap();
        assert_eq!(v, "[2.0000000000000000e0,null]");
    }
}
