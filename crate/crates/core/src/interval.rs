//! Rational-endpoint intervals.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rat;

/// A nondegenerate closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "(Rat, Rat)", into = "(Rat, Rat)")]
pub struct Interval {
    lo: Rat,
    hi: Rat,
}

impl TryFrom<(Rat, Rat)> for Interval {
    type Error = Error;
    fn try_from((lo, hi): (Rat, Rat)) -> Result<Interval> {
        Interval::new(lo, hi)
    }
}

impl From<Interval> for (Rat, Rat) {
    fn from(i: Interval) -> (Rat, Rat) {
        (i.lo, i.hi)
    }
}

impl Interval {
    pub fn new(lo: Rat, hi: Rat) -> Result<Interval> {
        if lo >= hi {
            return Err(Error::domain(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> Rat {
        self.lo
    }

    pub fn hi(&self) -> Rat {
        self.hi
    }

    pub fn length(&self) -> Rat {
        self.hi - self.lo
    }

    pub fn contains(&self, x: Rat) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_in_interior(&self, x: Rat) -> bool {
        self.lo < x && x < self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Parse the `lo:hi` syntax used on the command line, e.g. `1/1:3/1` or `0:4`.
impl FromStr for Interval {
    type Err = Error;
    fn from_str(s: &str) -> Result<Interval> {
        let (lo, hi) = s
            .split_once(':')
            .ok_or_else(|| Error::parse(format!("expected lo:hi, got {s:?}")))?;
        Interval::new(lo.parse()?, hi.parse()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cli_syntax() {
        let i: Interval = "1/1:3/1".parse().unwrap();
        assert_eq!(i.lo(), Rat::int(1));
        assert_eq!(i.hi(), Rat::int(3));
        assert_eq!("0:4".parse::<Interval>().unwrap().length(), Rat::int(4));
        assert!("3:3".parse::<Interval>().is_err());
        assert!("4:1".parse::<Interval>().is_err());
        assert!("1,2".parse::<Interval>().is_err());
    }

    #[test]
    fn serde_rejects_empty() {
        assert!(serde_json::from_str::<Interval>(r#"["2/1","1/1"]"#).is_err());
        let i: Interval = serde_json::from_str(r#"["1/2","3/2"]"#).unwrap();
        assert_eq!(i.length(), Rat::ONE);
    }
}
