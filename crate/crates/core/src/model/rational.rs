//! Exact rationals.
//!
//! Every ratio in the crate (normalized storage `α/β`, breakpoints such as
//! `37/13`, trade-off vertices) is a [`Rational`]. The underlying
//! [`num_rational::Ratio`] keeps the denominator positive and the fraction
//! reduced after every operation.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::Ratio<i128>;

pub fn rat(numer: i128, denom: i128) -> Rational {
    Rational::new(numer, denom)
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(value as i128)
}

/// Renders `p/q`, or just `p` for integers.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses `p`, `p/q` or `-p/q`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational: {text:?}"));
    match text.split_once('/') {
        None => text
            .parse::<i128>()
            .map(Rational::from_integer)
            .map_err(|_| bad()),
        Some((p, q)) => {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(Rational::new(p, q))
        }
    }
}

pub fn is_nonnegative(value: &Rational) -> bool {
    !value.is_negative()
}

/// Serde adapter storing a rational as its `p/q` string.
pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        value: &Rational,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Like [`serde_rational`], with `None` (an unbounded end) as `null`.
pub mod serde_rational_opt {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        value: &Option<Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match value {
            Some(v) => s.serialize_str(&format_rational(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|text| parse_rational(&text).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("37/13").unwrap(), rat(37, 13));
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational(" 5 ").unwrap(), int(5));
        assert_eq!(format_rational(&rat(74, 26)), "37/13");
        assert_eq!(format_rational(&rat(8, 4)), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn reduced_with_positive_denominator() {
        let r = rat(6, -4);
        assert_eq!(*r.numer(), -3);
        assert_eq!(*r.denom(), 2);
    }
}
