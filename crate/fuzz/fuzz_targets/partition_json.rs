//! Fuzz partition JSON deserialization. Decoding untrusted partitions must
//! never panic; whether a decoded partition passes verification against a
//! profile is allowed to go either way, but verification must not panic.

#![no_main]

use libfuzzer_sys::fuzz_target;

use dimlab_core::partition::Partition;
use dimlab_core::ComplexityProfile;

fuzz_target!(|data: &[u8]| {
    let Ok(partition) = serde_json::from_slice::<Partition>(data) else {
        return;
    };
    let profile = ComplexityProfile::identity(16);
    let _ = partition.verify(&profile);
    let json = serde_json::to_vec(&partition).unwrap();
    let back: Partition = serde_json::from_slice(&json).unwrap();
    assert_eq!(back, partition);
});
