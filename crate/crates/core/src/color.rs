//! The five interval colors and their exact classification.
//!
//! Writing `g(u) = f(u) - u`, the colors of an interval `[a, b]` are:
//!
//! * yellow — `f` grows at least at unit rate from the left endpoint:
//!   `g(u) >= g(a)` for all `u` in `[a, b]`;
//! * teal — the deficit from the right endpoint is at most the distance:
//!   `g(u) >= g(b)` for all `u` in `[a, b]`;
//! * red — every piece of `f` inside the interval has slope `> 1`;
//! * blue — `f` is constant on the interval;
//! * green — yellow and teal with length at most the scale parameter `t`
//!   (equivalently: endpoints at equal height `g(a) = g(b)`, nothing below
//!   them in between, length at most `t`).
//!
//! Since `g` is linear on each unit segment, each condition is decided by
//! finitely many comparisons at the endpoints and the interior integer
//! breakpoints.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::profile::ComplexityProfile;
use crate::rational::Rat;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColorSet {
    pub yellow: bool,
    pub teal: bool,
    pub red: bool,
    pub blue: bool,
    pub green: bool,
}

impl ColorSet {
    /// Check the structural implications between flags.
    pub fn is_coherent(&self) -> bool {
        (!self.green || (self.yellow && self.teal))
            && (!self.blue || self.teal)
            && (!self.red || self.yellow)
            && !(self.red && self.blue)
    }
}

impl std::fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut names = Vec::new();
        if self.yellow {
            names.push("yellow");
        }
        if self.teal {
            names.push("teal");
        }
        if self.red {
            names.push("red");
        }
        if self.blue {
            names.push("blue");
        }
        if self.green {
            names.push("green");
        }
        write!(f, "{{{}}}", names.join(","))
    }
}

/// Integer breakpoints strictly inside `(lo, hi)`, plus both endpoints.
fn check_points(interval: &Interval) -> impl Iterator<Item = Rat> + '_ {
    let first = interval.lo().floor() + 1;
    let last = interval.hi().ceil() - 1;
    std::iter::once(interval.lo())
        .chain((first..=last).map(Rat::int).filter(move |p| interval.contains_in_interior(*p)))
        .chain(std::iter::once(interval.hi()))
}

/// Exact color classification of `interval` under `profile` at scale `t`.
pub fn classify(profile: &ComplexityProfile, interval: &Interval, t: Rat) -> Result<ColorSet> {
    if interval.lo().is_negative() || interval.hi() > Rat::int(profile.horizon() as i64) {
        return Err(Error::domain(format!(
            "interval {interval:?} outside [0, {}]",
            profile.horizon()
        )));
    }
    if t <= Rat::ZERO {
        return Err(Error::domain("scale t must be positive"));
    }

    let g_lo = profile.gap(interval.lo())?;
    let g_hi = profile.gap(interval.hi())?;
    let mut min_gap = g_lo.min(g_hi);
    for p in check_points(interval) {
        min_gap = min_gap.min(profile.gap(p)?);
    }
    let yellow = min_gap >= g_lo;
    let teal = min_gap >= g_hi;
    let green = yellow && teal && interval.length() <= t;

    // Red and blue are slope statements about the unit segments meeting the
    // interior, which partial end segments inherit.
    let first_seg = interval.lo().floor().max(0) as u32;
    let last_seg = (interval.hi().ceil() - 1).min(profile.horizon() as i64 - 1) as u32;
    let mut red = true;
    let mut blue = true;
    for s in first_seg..=last_seg {
        let slope = profile.segment_slope(s);
        if slope <= 1 {
            red = false;
        }
        if slope != 0 {
            blue = false;
        }
    }

    Ok(ColorSet {
        yellow,
        teal,
        red,
        blue,
        green,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(incs: &[u32]) -> ComplexityProfile {
        ComplexityProfile::from_increments(incs.to_vec()).unwrap()
    }

    fn iv(lo: i64, hi: i64) -> Interval {
        Interval::new(Rat::int(lo), Rat::int(hi)).unwrap()
    }

    #[test]
    fn identity_profile_is_yellow_teal() {
        let c = classify(&p(&[1, 1, 1, 1]), &iv(0, 4), Rat::int(2)).unwrap();
        assert!(c.yellow && c.teal && !c.green && !c.red && !c.blue);
    }

    #[test]
    fn constant_profile_is_teal_blue() {
        let c = classify(&p(&[0, 0, 0, 0]), &iv(0, 4), Rat::int(2)).unwrap();
        assert!(c.teal && c.blue && !c.yellow && !c.red && !c.green);
    }

    #[test]
    fn peak_interval_is_green() {
        // f(1) = 2, f(2) = 4, f(3) = 4: on [1,3] both endpoint gaps equal 1
        // and the interior stays above, with length 2 <= t.
        let c = classify(&p(&[2, 2, 0, 0]), &iv(1, 3), Rat::int(2)).unwrap();
        assert!(c.yellow && c.teal && c.green);
        assert!(!c.red && !c.blue);
    }

    #[test]
    fn red_and_blue_segments() {
        let profile = p(&[2, 2, 0, 0]);
        let c = classify(&profile, &iv(0, 1), Rat::int(2)).unwrap();
        assert!(c.red && c.yellow && !c.teal && !c.blue);
        let c = classify(&profile, &iv(3, 4), Rat::int(2)).unwrap();
        assert!(c.blue && c.teal && !c.yellow && !c.red);
    }

    #[test]
    fn fractional_endpoints() {
        let profile = p(&[2, 2, 0, 0]);
        let half = Interval::new(Rat::new(1, 2), Rat::new(7, 2)).unwrap();
        let c = classify(&profile, &half, Rat::int(4)).unwrap();
        // g(1/2) = 1/2, g(7/2) = 1/2, interior stays above: green at t = 4.
        assert!(c.green && c.yellow && c.teal);
        let c = classify(&profile, &half, Rat::int(2)).unwrap();
        assert!(!c.green && c.yellow && c.teal);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(classify(&p(&[1, 1]), &iv(0, 3), Rat::ONE).is_err());
        assert!(classify(&p(&[1, 1]), &iv(0, 2), Rat::ZERO).is_err());
    }
}
