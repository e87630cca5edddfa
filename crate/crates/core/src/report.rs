//! Output formatting shared by the CLI and the library reports.

use num_rational::BigRational;

/// Real values are printed with 12 significant digits.
pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.11e}")
    }
}

/// Exact rationals as `"p/q"` (or `"p"` when the denominator is 1).
pub fn fmt_rational(r: &BigRational) -> String {
    r.to_string()
}

/// Serde adapter writing a `BigRational` as a `"p/q"` string.
pub mod rational_string {
    use num_rational::BigRational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| de::Error::custom(format!("bad rational {s:?}")))
    }
}

/// Serde adapter writing an `f64` through [`fmt_f64`].
pub mod f64_string {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::fmt_f64(*v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| de::Error::custom(format!("bad number {s:?}")))
    }
}
