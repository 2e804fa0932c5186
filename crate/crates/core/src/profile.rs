//! Slope-capped complexity profiles.
//!
//! A profile is a non-decreasing piecewise-linear function `f` on
//! `[0, horizon]` with `f(0) = 0`, integer breakpoints, and integer increments
//! `f(s) - f(s-1)` bounded by `slope_cap`. It stands in for the
//! precision-indexed information content of a planar point, and everything
//! else in the crate is defined in terms of it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rat;

/// Default increment cap; the ambient dimension is 2 throughout.
pub const DEFAULT_SLOPE_CAP: u32 = 2;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawProfile", into = "RawProfile")]
pub struct ComplexityProfile {
    horizon: u32,
    slope_cap: u32,
    increments: Vec<u32>,
    /// Prefix sums of `increments`; `values[s] = f(s)`.
    values: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct RawProfile {
    horizon: u32,
    slope_cap: u32,
    increments: Vec<u32>,
}

impl TryFrom<RawProfile> for ComplexityProfile {
    type Error = Error;
    fn try_from(raw: RawProfile) -> Result<ComplexityProfile> {
        ComplexityProfile::new(raw.horizon, raw.slope_cap, raw.increments)
    }
}

impl From<ComplexityProfile> for RawProfile {
    fn from(p: ComplexityProfile) -> RawProfile {
        RawProfile {
            horizon: p.horizon,
            slope_cap: p.slope_cap,
            increments: p.increments,
        }
    }
}

impl std::fmt::Debug for ComplexityProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "profile{:?}", self.increments)
    }
}

impl ComplexityProfile {
    /// Build a profile from its per-step increments.
    pub fn new(horizon: u32, slope_cap: u32, increments: Vec<u32>) -> Result<ComplexityProfile> {
        if horizon == 0 {
            return Err(Error::domain("horizon must be positive"));
        }
        if slope_cap == 0 {
            return Err(Error::domain("slope_cap must be positive"));
        }
        if horizon > 1_000_000 {
            return Err(Error::domain("horizon too large"));
        }
        if increments.len() != horizon as usize {
            return Err(Error::domain(format!(
                "expected {} increments, got {}",
                horizon,
                increments.len()
            )));
        }
        if let Some(bad) = increments.iter().find(|&&d| d > slope_cap) {
            return Err(Error::domain(format!(
                "increment {bad} exceeds slope_cap {slope_cap}"
            )));
        }
        let mut values = Vec::with_capacity(increments.len() + 1);
        values.push(0i64);
        for &d in &increments {
            values.push(values.last().unwrap() + d as i64);
        }
        Ok(ComplexityProfile {
            horizon,
            slope_cap,
            increments,
            values,
        })
    }

    /// Profile with the default slope cap.
    pub fn from_increments(increments: Vec<u32>) -> Result<ComplexityProfile> {
        ComplexityProfile::new(increments.len() as u32, DEFAULT_SLOPE_CAP, increments)
    }

    /// The identity-slope profile `f(s) = s`.
    pub fn identity(horizon: u32) -> ComplexityProfile {
        ComplexityProfile::from_increments(vec![1; horizon as usize]).unwrap()
    }

    /// The constant-zero profile.
    pub fn zero(horizon: u32) -> ComplexityProfile {
        ComplexityProfile::from_increments(vec![0; horizon as usize]).unwrap()
    }

    /// The rounded-line profile `f(s) = ceil(d * s)`; requires `0 <= d <= cap`.
    pub fn ceil_line(d: Rat, horizon: u32, slope_cap: u32) -> Result<ComplexityProfile> {
        if d.is_negative() || d > Rat::int(slope_cap as i64) {
            return Err(Error::domain(format!(
                "line slope {d} outside [0, {slope_cap}]"
            )));
        }
        let mut increments = Vec::with_capacity(horizon as usize);
        let mut prev = 0i64;
        for s in 1..=horizon as i64 {
            let v = (d * Rat::int(s)).ceil();
            increments.push((v - prev) as u32);
            prev = v;
        }
        ComplexityProfile::new(horizon, slope_cap, increments)
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn slope_cap(&self) -> u32 {
        self.slope_cap
    }

    pub fn increments(&self) -> &[u32] {
        &self.increments
    }

    /// `f(s)` at an integer precision.
    pub fn value_at(&self, s: u32) -> i64 {
        self.values[s as usize]
    }

    /// Increment of the unit segment `[s, s+1]` (0-based segment index `s`).
    pub fn segment_slope(&self, s: u32) -> i64 {
        self.increments[s as usize] as i64
    }

    /// Piecewise-linear evaluation at a rational point of `[0, horizon]`.
    pub fn eval(&self, a: Rat) -> Result<Rat> {
        if a.is_negative() || a > Rat::int(self.horizon as i64) {
            return Err(Error::domain(format!(
                "argument {a} outside [0, {}]",
                self.horizon
            )));
        }
        let lo = a.floor();
        if Rat::int(lo) == a {
            return Ok(Rat::int(self.values[lo as usize]));
        }
        let f_lo = self.values[lo as usize];
        let f_hi = self.values[lo as usize + 1];
        Ok(Rat::int(f_lo) + (a - Rat::int(lo)) * Rat::int(f_hi - f_lo))
    }

    /// `f(a) - a`, the deviation from the diagonal. All interval colorings are
    /// statements about this function.
    pub fn gap(&self, a: Rat) -> Result<Rat> {
        Ok(self.eval(a)? - a)
    }

    /// `f(s) - s` at an integer precision.
    pub fn gap_at(&self, s: u32) -> i64 {
        self.values[s as usize] - s as i64
    }

    /// True iff `f(s) >= d*s` for every integer `s` with `s0 <= s <= horizon`.
    ///
    /// Because `f` and the line are both linear between integers, checking the
    /// integers decides the inequality on the whole of `[s0, horizon]`.
    pub fn has_dim_at_least(&self, d: Rat, s0: u32) -> bool {
        (s0..=self.horizon).all(|s| Rat::int(self.value_at(s)) >= d * Rat::int(s as i64))
    }

    /// Smallest `s0` such that `f(s) >= s` for all `s0 <= s <= horizon`, if any.
    pub fn diagonal_onset(&self) -> Option<u32> {
        let mut onset = None;
        for s in (0..=self.horizon).rev() {
            if self.gap_at(s) >= 0 {
                onset = Some(s);
            } else {
                break;
            }
        }
        onset
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(incs: &[u32]) -> ComplexityProfile {
        ComplexityProfile::from_increments(incs.to_vec()).unwrap()
    }

    #[test]
    fn eval_identity_profile() {
        assert_eq!(p(&[1, 1, 1, 1]).eval(Rat::int(2)).unwrap(), Rat::int(2));
    }

    #[test]
    fn eval_interpolates() {
        // f(1) = 2, f(2) = 4, so the midpoint evaluates to 3.
        assert_eq!(p(&[2, 2, 0, 0]).eval(Rat::new(3, 2)).unwrap(), Rat::int(3));
    }

    #[test]
    fn eval_constant_profile() {
        assert_eq!(p(&[0, 0, 0, 0]).eval(Rat::new(7, 2)).unwrap(), Rat::ZERO);
    }

    #[test]
    fn eval_rejects_out_of_range() {
        assert!(p(&[1, 1]).eval(Rat::new(-1, 2)).is_err());
        assert!(p(&[1, 1]).eval(Rat::new(5, 2)).is_err());
    }

    #[test]
    fn dim_checks() {
        assert!(p(&[1, 1, 1, 1]).has_dim_at_least(Rat::ONE, 0));
        assert!(!p(&[0, 0, 0, 0]).has_dim_at_least(Rat::ONE, 0));
        // min over s of f(s)/s is 1, attained at s = 4.
        assert!(p(&[2, 2, 0, 0]).has_dim_at_least(Rat::ONE, 0));
        assert!(!p(&[2, 2, 0, 0]).has_dim_at_least(Rat::new(11, 10), 0));
    }

    #[test]
    fn diagonal_onset_examples() {
        assert_eq!(p(&[1, 1, 1, 1]).diagonal_onset(), Some(0));
        assert_eq!(p(&[0, 0, 2, 2, 2, 2, 2, 2]).diagonal_onset(), Some(4));
        assert_eq!(p(&[0, 0, 0, 0]).diagonal_onset(), None);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(ComplexityProfile::new(2, 2, vec![3, 0]).is_err());
        assert!(ComplexityProfile::new(2, 2, vec![1]).is_err());
        assert!(ComplexityProfile::new(0, 2, vec![]).is_err());
    }

    #[test]
    fn serde_round_trip_and_validation() {
        let profile = p(&[2, 0, 1, 2]);
        let json = serde_json::to_string(&profile).unwrap();
        assert_eq!(
            json,
            r#"{"horizon":4,"slope_cap":2,"increments":[2,0,1,2]}"#
        );
        let back: ComplexityProfile = serde_json::from_str(&json).unwrap();
        assert_eq!(back, profile);
        // Invariants are enforced on deserialization too.
        let bad = r#"{"horizon":4,"slope_cap":2,"increments":[2,0,9,2]}"#;
        assert!(serde_json::from_str::<ComplexityProfile>(bad).is_err());
    }

    #[test]
    fn ceil_line_profiles() {
        let q = ComplexityProfile::ceil_line(Rat::new(6, 5), 10, 2).unwrap();
        for s in 0..=10u32 {
            assert_eq!(
                q.value_at(s),
                (Rat::new(6, 5) * Rat::int(s as i64)).ceil(),
                "s = {s}"
            );
        }
    }
}
