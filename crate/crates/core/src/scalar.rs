//! Scalar abstraction shared by the convolution, classifier, shattering and
//! synthesis code.
//!
//! Everything in this crate is written against [`Scalar`], so it can be run on
//! `f64` for quick exploration, but every certificate the crate produces is
//! computed with [`Rational`](crate::Rational), where comparisons are exact.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed};

/// Ordered field-like scalar.
pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed + FromPrimitive {
    /// Total comparison; incomparable values (NaN) compare equal.
    fn cmp_total(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }

    fn from_int(value: i64) -> Self {
        Self::from_i64(value).expect("integer is representable")
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_int(numer) / Self::from_int(denom)
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl<T> Scalar for T where T: Clone + Debug + PartialOrd + Num + Signed + FromPrimitive {}

/// Sorts and removes duplicates from a vector of scalars.
pub(crate) fn sort_dedup<T: Scalar>(values: &mut Vec<T>) {
    values.sort_by(|a, b| a.cmp_total(b));
    values.dedup();
}

/// Formats a rational as `p/q` (always with an explicit denominator).
pub fn format_rational(value: &BigRational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses `p/q`, `p` or a finite decimal such as `-1.25`.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((numer, denom)) = text.split_once('/') {
        let numer: BigInt = numer.trim().parse().ok()?;
        let denom: BigInt = denom.trim().parse().ok()?;
        if denom == BigInt::from(0) {
            return None;
        }
        return Some(BigRational::new(numer, denom));
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
        let mut numer: BigInt = digits.parse().ok()?;
        if negative {
            numer = -numer;
        }
        let denom = num_traits::pow(BigInt::from(10), frac_part.len());
        return Some(BigRational::new(numer, denom));
    }
    let numer: BigInt = text.parse().ok()?;
    Some(BigRational::from_integer(numer))
}

/// Serde adapter storing a [`BigRational`] as a `"p/q"` string.
pub mod rational_str {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_rational(&text).ok_or_else(|| D::Error::custom(format!("bad rational {text:?}")))
    }
}

/// Serde adapter for `Vec<BigRational>` as a list of `"p/q"` strings.
pub mod rational_vec {
    use num_rational::BigRational;
    use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&super::format_rational(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| super::parse_rational(t).ok_or_else(|| D::Error::custom(format!("bad rational {t:?}"))))
            .collect()
    }
}
