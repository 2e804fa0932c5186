//! Fuzz the command-line `lo:hi` interval syntax.

#![no_main]

use libfuzzer_sys::fuzz_target;

use dimlab_core::Interval;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(interval) = s.parse::<Interval>() {
            // Accepted intervals are nondegenerate and display round-trips.
            assert!(interval.lo() < interval.hi());
            let back: Interval = interval.to_string().parse().unwrap();
            assert_eq!(back, interval);
        }
    }
});
