//! Temporary scaling probe (removed before finalizing).

use dimlab_core::bounds::TheoremId;
use dimlab_core::search::{verify_theorem, Constraint, SearchMode, SearchSpec};
use dimlab_core::Rat;

#[test]
#[ignore]
fn probe_proj_main() {
    for h in [8, 10, 12] {
        let start = std::time::Instant::now();
        let spec = SearchSpec {
            horizon: h,
            slope_cap: 2,
            constraint: Constraint::DimGt1,
            theorem: TheoremId::ProjMain,
            mode: SearchMode::Exhaustive,
        };
        let report = verify_theorem(&spec).unwrap();
        println!(
            "h={h}: profiles={} evals={} counterexamples={} min_gap={:?} elapsed={:?}",
            report.profiles_checked,
            report.evaluations,
            report.counterexamples.len(),
            report.min_gap,
            start.elapsed()
        );
        if !report.counterexamples.is_empty() {
            println!("FIRST CE: {:?}", report.counterexamples[0]);
        }
    }
}

#[test]
#[ignore]
fn probe_structure_all_profiles() {
    // Full space (no constraint) exercises rgb_partition internal checks for
    // every profile and every t, via the ProjPartition theorem + direct rgb.
    use dimlab_core::partition::{find_rgb_sequence, rgb_partition};
    use dimlab_core::ComplexityProfile;
    use rayon::prelude::*;
    for h in [8u32, 10] {
        let start = std::time::Instant::now();
        let total = 3u64.pow(h);
        let bad: u64 = (0..total)
            .into_par_iter()
            .map(|mut index| {
                let mut incs = vec![0u32; h as usize];
                for slot in incs.iter_mut().rev() {
                    *slot = (index % 3) as u32;
                    index /= 3;
                }
                let p = ComplexityProfile::from_increments(incs).unwrap();
                let mut bad = 0;
                for t in 1..=h {
                    match rgb_partition(&p, h, Rat::int(t as i64)) {
                        Ok(rgb) => {
                            if find_rgb_sequence(&rgb, Rat::int(t as i64)).is_err() {
                                bad += 1;
                            }
                        }
                        Err(e) => {
                            if bad == 0 {
                                eprintln!("STUCK: {p:?} t={t}: {e}");
                            }
                            bad += 1;
                        }
                    }
                }
                bad
            })
            .sum();
        println!("h={h}: structural failures={bad} elapsed={:?}", start.elapsed());
    }
}

#[test]
#[ignore]
fn probe_pinned() {
    for (d_num, d_den) in [(1i64, 1i64), (6, 5), (3, 2), (2, 1)] {
        for h in [8u32, 12] {
            let spec = SearchSpec {
                horizon: h,
                slope_cap: 2,
                constraint: Constraint::DimGeD {
                    d: Rat::new(d_num, d_den),
                },
                theorem: TheoremId::PinnedEffDim,
                mode: SearchMode::Exhaustive,
            };
            let start = std::time::Instant::now();
            let report = verify_theorem(&spec).unwrap();
            println!(
                "d={d_num}/{d_den} h={h}: profiles={} ce={} min_gap={:?} elapsed={:?}",
                report.profiles_checked,
                report.counterexamples.len(),
                report.min_gap,
                start.elapsed()
            );
            if !report.counterexamples.is_empty() {
                println!("FIRST CE: {:?}", report.counterexamples[0]);
            }
        }
    }
}
