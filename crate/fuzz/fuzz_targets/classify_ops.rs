//! Structured fuzz of the color classifier: on arbitrary profiles and
//! rational intervals, classification must be total and its flag
//! implications must hold.

#![no_main]

use arbitrary::Arbitrary;
use libfuzzer_sys::fuzz_target;

use dimlab_core::{classify, ComplexityProfile, Interval, Rat};

#[derive(Arbitrary, Debug)]
struct Input {
    increments: Vec<u8>,
    slope_cap: u8,
    lo_num: u16,
    lo_den: u8,
    len_num: u16,
    len_den: u8,
    t_num: u8,
    t_den: u8,
}

fuzz_target!(|input: Input| {
    let cap = (input.slope_cap % 4 + 1) as u32;
    let increments: Vec<u32> = input
        .increments
        .iter()
        .take(24)
        .map(|&d| d as u32 % (cap + 1))
        .collect();
    if increments.is_empty() {
        return;
    }
    let horizon = increments.len() as u32;
    let profile = ComplexityProfile::new(horizon, cap, increments).unwrap();

    let lo = Rat::new(input.lo_num as i64, input.lo_den as i64 + 1);
    let len = Rat::new(input.len_num as i64 + 1, input.len_den as i64 + 1);
    let hi = lo + len;
    if hi > Rat::int(horizon as i64) {
        return;
    }
    let interval = Interval::new(lo, hi).unwrap();
    let t = Rat::new(input.t_num as i64 + 1, input.t_den as i64 + 1);

    let colors = classify(&profile, &interval, t).unwrap();
    assert!(colors.is_coherent(), "{colors:?} on {profile:?} {interval:?}");
    if colors.green {
        // Equal-height endpoints and length within scale.
        assert!(interval.length() <= t);
        assert_eq!(
            profile.eval(interval.hi()).unwrap() - profile.eval(interval.lo()).unwrap(),
            interval.length()
        );
    }
});
