//! Fuzz the `p/q` rational parser: must never panic, and every accepted
//! value must round-trip through its canonical display form.

#![no_main]

use libfuzzer_sys::fuzz_target;

use dimlab_core::Rat;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(value) = s.parse::<Rat>() {
            let canonical = value.to_string();
            let back: Rat = canonical.parse().expect("canonical form must parse");
            assert_eq!(back, value);
            assert!(value.denom() > 0);
        }
    }
});
