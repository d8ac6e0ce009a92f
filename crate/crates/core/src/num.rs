//! Exact rational helpers shared by every module: parsing, formatting,
//! gcds and serde adapters for the `"p/q"` string form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("decimal literal {0:?} rejected; write rationals as p/q")]
    Decimal(String),
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Parses `"p/q"` or a bare integer `"p"`. Decimal notation is rejected so
/// that every value entering the toolkit is exact.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseRationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if s.contains(['.', 'e', 'E']) {
        return Err(ParseRationalError::Decimal(s.to_string()));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| ParseRationalError::Malformed(s.to_string()))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| ParseRationalError::Malformed(s.to_string()))?;
    if den.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(s.to_string()));
    }
    Ok(BigRational::new(num, den))
}

/// Formats a reduced rational as `"p/q"`, or `"p"` when the denominator is 1.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Display wrapper so rationals print in `p/q` form inside format strings.
pub struct Ratio<'a>(pub &'a BigRational);

impl fmt::Display for Ratio<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(self.0))
    }
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Greatest rational g with a/g and b/g both integers (a, b not both zero).
pub fn rational_gcd(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    let num = (a.numer() * b.denom()).gcd(&(b.numer() * a.denom()));
    BigRational::new(num, a.denom() * b.denom())
}

/// Exact integer power with a possibly negative exponent.
pub fn rational_pow(base: &BigRational, exp: i64) -> BigRational {
    let mut acc = BigRational::one();
    let b = if exp < 0 { base.recip() } else { base.clone() };
    for _ in 0..exp.unsigned_abs() {
        acc *= &b;
    }
    acc
}

/// Smallest integer not below a / b, for b > 0.
pub fn ceil_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

pub mod serde_rational {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rational_vec {
    use num_rational::BigRational;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(qs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(qs.len()))?;
        for q in qs {
            seq.serialize_element(&super::format_rational(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| super::parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}
