use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// An exact rational number, always stored in lowest terms with a positive
/// denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<i64>);

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return domain("zero denominator");
        }
        Ok(Self(Ratio::new(num, den)))
    }

    pub fn integer(n: i64) -> Self {
        Self(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    /// `self <= -1`.
    pub fn at_most_minus_one(&self) -> bool {
        self.numer() <= -self.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn parse_int(s: &str) -> Result<i64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return domain(format!("malformed rational {s:?}"));
    }
    s.parse()
        .map_err(|_| Error::Domain(format!("rational component {s:?} out of range")))
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `u/v`, integers, and finite decimals such as `-0.25`.
    fn from_str(text: &str) -> Result<Self> {
        let s = text.trim();
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let value = if let Some((u, v)) = body.split_once('/') {
            let den = parse_int(v)?;
            if den.is_zero() {
                return domain(format!("zero denominator in {text:?}"));
            }
            Ratio::new(parse_int(u)?, den)
        } else if let Some((whole, frac)) = body.split_once('.') {
            let whole = if whole.is_empty() { 0 } else { parse_int(whole)? };
            let digits = parse_int(frac)?;
            let scale = 10i64
                .checked_pow(frac.len() as u32)
                .ok_or_else(|| Error::Domain(format!("too many decimals in {text:?}")))?;
            let num = whole
                .checked_mul(scale)
                .and_then(|w| w.checked_add(digits))
                .ok_or_else(|| Error::Domain(format!("{text:?} out of range")))?;
            Ratio::new(num, scale)
        } else {
            Ratio::from_integer(parse_int(body)?)
        };
        Ok(Self(if negative { -value } else { value }))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::integer(n)
    }
}
