//! Structured fuzz of the partition procedures: every construction on an
//! arbitrary profile must either fail cleanly or satisfy its own rule.

#![no_main]

use arbitrary::Arbitrary;
use libfuzzer_sys::fuzz_target;

use dimlab_core::partition::{
    admissible_partition, find_rgb_sequence, good_partition, rgb_partition, RgbColor,
};
use dimlab_core::{ComplexityProfile, Rat};

#[derive(Arbitrary, Debug)]
struct Input {
    increments: Vec<u8>,
    t_num: u8,
    t_den: u8,
}

fuzz_target!(|input: Input| {
    let increments: Vec<u32> = input
        .increments
        .iter()
        .take(20)
        .map(|&d| d as u32 % 3)
        .collect();
    if increments.is_empty() {
        return;
    }
    let r = increments.len() as u32;
    let profile = ComplexityProfile::from_increments(increments).unwrap();
    let t = Rat::new(input.t_num as i64 % 40 + 1, input.t_den as i64 % 4 + 1).min(Rat::int(r as i64));

    let budget = (3 * (Rat::int(r as i64) / t).ceil()) as usize;
    let partition = admissible_partition(&profile, Rat::ZERO, Rat::int(r as i64), t, budget)
        .expect("greedy admissible partition always exists within 3*ceil(r/t)");
    partition.verify(&profile).unwrap();

    let good = good_partition(&profile, r).unwrap();
    good.verify(&profile).unwrap();
    for w in good.breakpoints.windows(3) {
        assert!(w[2] > Rat::int(2) * w[0]);
    }

    let rgb = rgb_partition(&profile, r, t).expect("decomposition is total");
    // Exact cover with certified piece colors is checked inside; on top of
    // that, a found red-green-blue run must carry at least t of green.
    if let Some(run) = find_rgb_sequence(&rgb, t).unwrap() {
        assert!(run.total_length >= t);
    }
    for w in rgb.pieces.windows(2) {
        assert!(!(w[0].color == RgbColor::Red && w[1].color == RgbColor::Blue));
    }
});
