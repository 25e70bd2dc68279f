//! Exact rational numbers and the `[0, 1]`-bounded [`Probability`] newtype.
//!
//! All arithmetic in this crate is exact. Text encodings accept either
//! `p/q` fractions or finite decimals; a decimal such as `0.38` is read as
//! `38/100` and never passes through floating point.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("cannot parse `{0}` as a rational number")]
    Parse(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("{0} is outside [0, 1]")]
    OutOfUnitInterval(String),
    #[error("{0} has no finite decimal expansion")]
    NotADecimal(String),
}

/// Shorthand for `num / den`. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `p/q`, an integer, or a finite decimal (`0.4`, `-1.25`, `.5`).
pub fn parse_rational(text: &str) -> Result<Rational, RationalError> {
    let s = text.trim();
    let err = || RationalError::Parse(text.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_int(num.trim()).ok_or_else(err)?;
        let den = parse_int(den.trim()).ok_or_else(err)?;
        if den.is_zero() {
            return Err(RationalError::ZeroDenominator(text.to_string()));
        }
        return Ok(Rational::new(num, den));
    }
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    let all_digits = |part: &str| part.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(whole) || !all_digits(frac) {
        return Err(err());
    }
    let digits = format!("{whole}{frac}");
    let num: BigInt = digits.parse().map_err(|_| err())?;
    let den = num_traits::pow(BigInt::from(10u32), frac.len());
    let value = Rational::new(num, den);
    Ok(if negative { -value } else { value })
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Canonical `p/q` text (`p` alone when the denominator is 1).
pub fn format_fraction(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Exact decimal text, available only when the reduced denominator is of
/// the form `2^a * 5^b`.
pub fn format_decimal(value: &Rational) -> Result<String, RationalError> {
    let mut den = value.denom().clone();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return Err(RationalError::NotADecimal(format_fraction(value)));
    }
    let places = twos.max(fives);
    let scale = num_traits::pow(BigInt::from(10u32), places);
    let scaled = (value.abs() * Rational::from_integer(scale.clone())).to_integer();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    let sign = if value.is_negative() { "-" } else { "" };
    if places == 0 {
        return Ok(format!("{sign}{int_part}"));
    }
    let frac = format!("{:0>width$}", frac_part.to_string(), width = places);
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        Ok(format!("{sign}{int_part}"))
    } else {
        Ok(format!("{sign}{int_part}.{frac}"))
    }
}

/// Nearest decimal rendering with a bounded number of places, for display
/// of values that have no exact decimal form.
pub fn format_approx(value: &Rational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), places);
    let scaled = (value * Rational::from_integer(scale.clone())).round();
    let shown = scaled / Rational::from_integer(scale);
    format_decimal(&shown).expect("power-of-ten denominator")
}

/// A rational number known to lie in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Probability(Rational);

impl Probability {
    pub fn new(value: Rational) -> Result<Self, RationalError> {
        if value.is_negative() || value > Rational::one() {
            return Err(RationalError::OutOfUnitInterval(format_fraction(&value)));
        }
        Ok(Self(value))
    }

    pub fn zero() -> Self {
        Self(Rational::zero())
    }

    pub fn one() -> Self {
        Self(Rational::one())
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_inner(self) -> Rational {
        self.0
    }
}

impl FromStr for Probability {
    type Err = RationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(parse_rational(s)?)
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_fraction(&self.0))
    }
}

pub(crate) fn in_unit_interval(value: &Rational) -> bool {
    !value.is_negative() && *value <= Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_rational("0.4").unwrap(), ratio(2, 5));
        assert_eq!(parse_rational("0.38").unwrap(), ratio(19, 50));
        assert_eq!(parse_rational("-1.25").unwrap(), ratio(-5, 4));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("11/30").unwrap(), ratio(11, 30));
        assert_eq!(parse_rational(" 22/100 ").unwrap(), ratio(11, 50));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", ".", "1/", "/2", "a", "1.2.3", "1e3", "0x10", "--1", "1/-"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
        assert_eq!(
            parse_rational("1/0"),
            Err(RationalError::ZeroDenominator("1/0".into()))
        );
    }

    #[test]
    fn decimal_output_only_when_exact() {
        assert_eq!(format_decimal(&ratio(8, 5)).unwrap(), "1.6");
        assert_eq!(format_decimal(&ratio(3, 25)).unwrap(), "0.12");
        assert_eq!(format_decimal(&ratio(-1, 8)).unwrap(), "-0.125");
        assert_eq!(format_decimal(&int(7)).unwrap(), "7");
        assert!(format_decimal(&ratio(49, 30)).is_err());
        assert_eq!(format_approx(&ratio(49, 30), 4), "1.6333");
    }

    #[test]
    fn probability_bounds() {
        assert!("0.3".parse::<Probability>().is_ok());
        assert!("1".parse::<Probability>().is_ok());
        assert!("11/10".parse::<Probability>().is_err());
        assert!("-0.1".parse::<Probability>().is_err());
    }

    proptest! {
        #[test]
        fn fraction_text_round_trips(num in -10_000i64..10_000, den in 1i64..10_000) {
            let value = ratio(num, den);
            prop_assert_eq!(parse_rational(&format_fraction(&value)).unwrap(), value);
        }

        #[test]
        fn decimal_text_round_trips(num in -100_000i64..100_000, a in 0u32..6, b in 0u32..6) {
            let value = ratio(num, 2i64.pow(a) * 5i64.pow(b));
            let text = format_decimal(&value).unwrap();
            prop_assert_eq!(parse_rational(&text).unwrap(), value);
        }
    }
}
