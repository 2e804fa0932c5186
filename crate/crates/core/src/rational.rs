//! Exact rational scalar used for every breakpoint, interval endpoint and
//! bound value.
//!
//! Serializes as a `"p/q"` string (always with an explicit denominator, always
//! reduced, denominator positive) so that reports are byte-stable. Parsing
//! also accepts a bare integer `"p"`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Largest numerator/denominator magnitude accepted from external input.
///
/// Internal arithmetic stays far below this; the cap exists so hostile input
/// cannot drive `i64` arithmetic toward overflow.
pub const PARSE_LIMIT: i64 = 1_000_000_000;

/// Exact rational number.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(Ratio<i64>);

impl Rat {
    pub const ZERO: Rat = Rat(Ratio::new_raw(0, 1));
    pub const ONE: Rat = Rat(Ratio::new_raw(1, 1));

    pub fn new(numer: i64, denom: i64) -> Rat {
        assert!(denom != 0, "rational with zero denominator");
        Rat(Ratio::new(numer, denom))
    }

    pub fn int(n: i64) -> Rat {
        Rat(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn floor(&self) -> i64 {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> i64 {
        self.0.ceil().to_integer()
    }

    pub fn min(self, other: Rat) -> Rat {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Rat) -> Rat {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn abs(self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn to_f64(self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::int(n)
    }
}

impl From<u32> for Rat {
    fn from(n: u32) -> Rat {
        Rat::int(n as i64)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "rational division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl AddAssign for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Rat {
    fn sub_assign(&mut self, rhs: Rat) {
        self.0 -= rhs.0;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat, Error> {
        let s = s.trim();
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let numer: i64 = num_str
            .trim()
            .parse()
            .map_err(|_| Error::parse(format!("invalid rational numerator in {s:?}")))?;
        let denom: i64 = den_str
            .trim()
            .parse()
            .map_err(|_| Error::parse(format!("invalid rational denominator in {s:?}")))?;
        if denom == 0 {
            return Err(Error::parse(format!("zero denominator in {s:?}")));
        }
        if numer.abs() > PARSE_LIMIT || denom.abs() > PARSE_LIMIT {
            return Err(Error::parse(format!(
                "rational {s:?} exceeds the accepted magnitude ({PARSE_LIMIT})"
            )));
        }
        Ok(Rat::new(numer, denom))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_forms() {
        assert_eq!("3/2".parse::<Rat>().unwrap(), Rat::new(3, 2));
        assert_eq!("7".parse::<Rat>().unwrap(), Rat::int(7));
        assert_eq!("-4/6".parse::<Rat>().unwrap(), Rat::new(-2, 3));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("".parse::<Rat>().is_err());
        assert!("2000000000000/3".parse::<Rat>().is_err());
    }

    #[test]
    fn canonical_display() {
        assert_eq!(Rat::new(4, 6).to_string(), "2/3");
        assert_eq!(Rat::new(3, -2).to_string(), "-3/2");
        assert_eq!(Rat::int(5).to_string(), "5/1");
    }

    #[test]
    fn round_trips_through_json() {
        let x = Rat::new(-7, 3);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, "\"-7/3\"");
        let back: Rat = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
    }
}
