//! Exact rational scalars with an explicit infinity.
//!
//! Storage sizes, transfer sizes, file sizes and every cut value are carried
//! as reduced fractions so that corner points such as `4/11` compare with
//! plain equality.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Reduced fraction backing every finite value.
pub type Q = Ratio<i128>;

/// A reduced rational number or positive infinity.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExactScalar {
    Finite(Q),
    Infinite,
}

impl ExactScalar {
    pub const INF: ExactScalar = ExactScalar::Infinite;

    pub fn zero() -> Self {
        ExactScalar::Finite(Q::zero())
    }

    pub fn int(v: i64) -> Self {
        ExactScalar::Finite(Q::from_integer(v as i128))
    }

    /// `p/q`; panics when `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        ExactScalar::Finite(Q::new(p as i128, q as i128))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExactScalar::Infinite)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExactScalar::Finite(q) if q.is_zero())
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, ExactScalar::Finite(q) if q.is_negative())
    }

    pub fn finite(&self) -> Option<Q> {
        match self {
            ExactScalar::Finite(q) => Some(*q),
            ExactScalar::Infinite => None,
        }
    }

    pub fn numer(&self) -> Option<i128> {
        self.finite().map(|q| *q.numer())
    }

    pub fn denom(&self) -> Option<i128> {
        self.finite().map(|q| *q.denom())
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Integer multiple, with `0 * inf = 0`.
    pub fn times(self, m: i64) -> Self {
        match self {
            ExactScalar::Finite(q) => ExactScalar::Finite(q * Q::from_integer(m as i128)),
            ExactScalar::Infinite => {
                assert!(m >= 0, "negative multiple of infinity");
                if m == 0 {
                    Self::zero()
                } else {
                    ExactScalar::Infinite
                }
            }
        }
    }

    /// Decimal approximation, for plotting only.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExactScalar::Finite(q) => *q.numer() as f64 / *q.denom() as f64,
            ExactScalar::Infinite => f64::INFINITY,
        }
    }
}

impl From<Q> for ExactScalar {
    fn from(q: Q) -> Self {
        ExactScalar::Finite(q)
    }
}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        ExactScalar::int(v)
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExactScalar::Finite(a), ExactScalar::Finite(b)) => a.cmp(b),
            (ExactScalar::Finite(_), ExactScalar::Infinite) => Ordering::Less,
            (ExactScalar::Infinite, ExactScalar::Finite(_)) => Ordering::Greater,
            (ExactScalar::Infinite, ExactScalar::Infinite) => Ordering::Equal,
        }
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExactScalar::Finite(a), ExactScalar::Finite(b)) => ExactScalar::Finite(a + b),
            _ => ExactScalar::Infinite,
        }
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    /// Panics on `inf - inf` and on `finite - inf`.
    fn sub(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExactScalar::Finite(a), ExactScalar::Finite(b)) => ExactScalar::Finite(a - b),
            (ExactScalar::Infinite, ExactScalar::Finite(_)) => ExactScalar::Infinite,
            _ => panic!("subtraction of infinity"),
        }
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    /// `0 * inf = 0`; negative times infinity panics.
    fn mul(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExactScalar::Finite(a), ExactScalar::Finite(b)) => ExactScalar::Finite(a * b),
            (ExactScalar::Finite(a), ExactScalar::Infinite)
            | (ExactScalar::Infinite, ExactScalar::Finite(a)) => {
                assert!(!a.is_negative(), "negative times infinity");
                if a.is_zero() {
                    ExactScalar::zero()
                } else {
                    ExactScalar::Infinite
                }
            }
            (ExactScalar::Infinite, ExactScalar::Infinite) => ExactScalar::Infinite,
        }
    }
}

impl Div for ExactScalar {
    type Output = ExactScalar;
    /// Finite over infinite is zero; division by zero or `inf / inf` panics.
    fn div(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExactScalar::Finite(a), ExactScalar::Finite(b)) => {
                assert!(!b.is_zero(), "division by zero");
                ExactScalar::Finite(a / b)
            }
            (ExactScalar::Finite(_), ExactScalar::Infinite) => ExactScalar::zero(),
            (ExactScalar::Infinite, ExactScalar::Finite(b)) => {
                assert!(b.is_positive(), "infinity over non-positive");
                ExactScalar::Infinite
            }
            (ExactScalar::Infinite, ExactScalar::Infinite) => panic!("inf / inf"),
        }
    }
}

impl Sum for ExactScalar {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ExactScalar::zero(), |a, b| a + b)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Finite(q) if *q.denom() == 1 => write!(f, "{}", q.numer()),
            ExactScalar::Finite(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            ExactScalar::Infinite => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactScalar {
    type Err = Error;

    /// Accepts `p`, `p/q` and `inf`. Decimal notation is rejected.
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        let bad = || {
            Error::Parse(format!(
                "not an exact rational: {s:?} (use p/q, an integer or inf)"
            ))
        };
        if t.eq_ignore_ascii_case("inf") {
            return Ok(ExactScalar::Infinite);
        }
        if t.contains(['.', 'e', 'E']) {
            return Err(bad());
        }
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (t, "1"),
        };
        let p: i128 = p.parse().map_err(|_| bad())?;
        let q: i128 = q.parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(ExactScalar::Finite(Q::new(p, q)))
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["4/11", "3", "-2/5", "inf", "0"] {
            let v: ExactScalar = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert_eq!("6/4".parse::<ExactScalar>().unwrap().to_string(), "3/2");
        assert_eq!("2/-4".parse::<ExactScalar>().unwrap().to_string(), "-1/2");
    }

    #[test]
    fn decimals_are_rejected() {
        assert!("0.5".parse::<ExactScalar>().is_err());
        assert!("1e3".parse::<ExactScalar>().is_err());
        assert!("1/0".parse::<ExactScalar>().is_err());
        assert!("x".parse::<ExactScalar>().is_err());
    }

    #[test]
    fn infinity_absorbs() {
        let inf = ExactScalar::INF;
        let two = ExactScalar::int(2);
        assert_eq!(inf.min(two), two);
        assert_eq!(two.max(inf), inf);
        assert_eq!(inf + two, inf);
        assert_eq!(inf.times(0), ExactScalar::zero());
        assert_eq!(ExactScalar::zero() * inf, ExactScalar::zero());
        assert_eq!(two / inf, ExactScalar::zero());
        assert!(two < inf);
    }

    #[test]
    fn serde_uses_strings() {
        let v = ExactScalar::ratio(2, 7);
        assert_eq!(serde_json::to_string(&v).unwrap(), "\"2/7\"");
        let back: ExactScalar = serde_json::from_str("\"inf\"").unwrap();
        assert!(back.is_infinite());
    }
}
