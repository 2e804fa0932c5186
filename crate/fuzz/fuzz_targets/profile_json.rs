//! Fuzz profile JSON deserialization: arbitrary bytes must never panic, and
//! any accepted profile must satisfy its structural invariants and
//! re-serialize losslessly.

#![no_main]

use libfuzzer_sys::fuzz_target;

use dimlab_core::{ComplexityProfile, Rat};

fuzz_target!(|data: &[u8]| {
    let Ok(profile) = serde_json::from_slice::<ComplexityProfile>(data) else {
        return;
    };
    assert_eq!(profile.increments().len(), profile.horizon() as usize);
    assert!(profile
        .increments()
        .iter()
        .all(|&d| d <= profile.slope_cap()));
    assert_eq!(profile.value_at(0), 0);
    // Evaluation respects monotonicity and the slope cap on a coarse grid.
    let mut prev = Rat::ZERO;
    for s in 1..=profile.horizon().min(64) {
        let v = profile.eval(Rat::int(s as i64)).unwrap();
        assert!(v >= prev);
        assert!(v - prev <= Rat::int(profile.slope_cap() as i64));
        prev = v;
    }
    let json = serde_json::to_vec(&profile).unwrap();
    let back: ComplexityProfile = serde_json::from_slice(&json).unwrap();
    assert_eq!(back, profile);
});
