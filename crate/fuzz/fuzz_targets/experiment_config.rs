//! Fuzz experiment-config JSON decoding and validation.

#![no_main]

use libfuzzer_sys::fuzz_target;

use dimlab_core::fractal::ExperimentConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(config) = serde_json::from_slice::<ExperimentConfig>(data) else {
        return;
    };
    // Validation decides, without panicking, whether the config is runnable.
    if config.validate().is_ok() {
        let json = serde_json::to_vec(&config).unwrap();
        let back: ExperimentConfig = serde_json::from_slice(&json).unwrap();
        assert_eq!(back, config);
    }
});
