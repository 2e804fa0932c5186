//! Adversarial search over profile space: exhaustive, pruned depth-first, and
//! seeded random sweeps hunting for counterexamples to the evaluated bounds
//! and for their tightness witnesses.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    distance_lower_bound, partition_distance_report, partition_projection_report,
    pinned_effdim_bound, projection_upper_bound, BoundReport, Mode, TheoremId,
};
use crate::error::{Error, Result};
use crate::partition::admissible_partition;
use crate::profile::ComplexityProfile;
use crate::rational::Rat;

/// Capacity guard for full enumerations.
pub const EXHAUSTIVE_LIMIT: f64 = 1e8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Constraint {
    /// Every increment sequence.
    None,
    /// Profiles staying on or above the diagonal: `f(s) >= s` for all `s`.
    DimGt1,
    /// Profiles with `f(s) >= d*s` for all `s`.
    DimGeD { d: Rat },
}

impl Constraint {
    pub fn admits(&self, profile: &ComplexityProfile) -> bool {
        match self {
            Constraint::None => true,
            Constraint::DimGt1 => profile.has_dim_at_least(Rat::ONE, 0),
            Constraint::DimGeD { d } => profile.has_dim_at_least(*d, 0),
        }
    }

    /// Slope requirement at step `s` given the running value `f(s-1)`, used
    /// for prefix pruning and feasible sampling.
    fn min_increment(&self, s: u32, prev_value: i64) -> i64 {
        let line = match self {
            Constraint::None => return 0,
            Constraint::DimGt1 => Rat::int(s as i64),
            Constraint::DimGeD { d } => *d * Rat::int(s as i64),
        };
        (line.ceil() - prev_value).max(0)
    }

    fn dimension(&self) -> Option<Rat> {
        match self {
            Constraint::None => None,
            Constraint::DimGt1 => Some(Rat::ONE),
            Constraint::DimGeD { d } => Some(*d),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SearchMode {
    /// Walk the full `(slope_cap + 1)^horizon` space, filtering on the
    /// constraint.
    Exhaustive,
    /// Depth-first walk sharing per-prefix state and pruning subtrees as soon
    /// as a prefix violates the constraint. Same leaves, same result.
    Dp,
    /// Seeded reproducible samples, drawn constraint-feasible step by step.
    Random { seed: u64, count: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub horizon: u32,
    pub slope_cap: u32,
    pub constraint: Constraint,
    pub theorem: TheoremId,
    pub mode: SearchMode,
}

impl SearchSpec {
    fn space_size(&self) -> f64 {
        ((self.slope_cap + 1) as f64).powi(self.horizon as i32)
    }

    fn guard(&self) -> Result<()> {
        if matches!(self.mode, SearchMode::Exhaustive | SearchMode::Dp)
            && self.space_size() > EXHAUSTIVE_LIMIT
        {
            return Err(Error::Capacity {
                required: self.space_size(),
                limit: EXHAUSTIVE_LIMIT,
            });
        }
        Ok(())
    }

    /// The dimension parameter handed to the pinned bound.
    fn pinned_dimension(&self) -> Result<Rat> {
        self.constraint.dimension().ok_or_else(|| {
            Error::contract("pinned-effdim verification needs a dimension constraint")
        })
    }
}

/// One evaluated (profile, r, t) point whose theorem inequality failed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub increments: Vec<u32>,
    pub r: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<Rat>,
    pub guaranteed: Rat,
    pub certified: Rat,
    pub gap: Rat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapWitness {
    pub increments: Vec<u32>,
    pub r: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<Rat>,
    pub gap: Rat,
    pub guaranteed: Rat,
    pub certified: Rat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub spec: SearchSpec,
    pub profiles_checked: u64,
    pub evaluations: u64,
    pub counterexamples: Vec<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_gap: Option<Rat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmin: Option<GapWitness>,
}

impl SearchReport {
    pub fn found_counterexample(&self) -> bool {
        !self.counterexamples.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Profile enumeration.
// ---------------------------------------------------------------------------

fn profile_from_index(mut index: u64, horizon: u32, slope_cap: u32) -> ComplexityProfile {
    let base = (slope_cap + 1) as u64;
    let mut increments = vec![0u32; horizon as usize];
    for slot in increments.iter_mut().rev() {
        *slot = (index % base) as u32;
        index /= base;
    }
    ComplexityProfile::new(horizon, slope_cap, increments).unwrap()
}

/// Stream of profiles the spec admits, in deterministic order.
pub fn enumerate_profiles(spec: &SearchSpec) -> Result<Box<dyn Iterator<Item = ComplexityProfile>>> {
    spec.guard()?;
    let horizon = spec.horizon;
    let cap = spec.slope_cap;
    match spec.mode {
        SearchMode::Exhaustive | SearchMode::Dp => {
            let constraint = spec.constraint.clone();
            let total = spec.space_size() as u64;
            Ok(Box::new(
                (0..total)
                    .map(move |i| profile_from_index(i, horizon, cap))
                    .filter(move |p| constraint.admits(p)),
            ))
        }
        SearchMode::Random { seed, count } => {
            let constraint = spec.constraint.clone();
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let mut out = Vec::with_capacity(count as usize);
            for _ in 0..count {
                out.push(sample_profile(&mut rng, horizon, cap, &constraint));
            }
            Ok(Box::new(out.into_iter()))
        }
    }
}

/// Draw one constraint-feasible profile: at each step the increment is chosen
/// uniformly from the slopes that keep the prefix feasible.
fn sample_profile(
    rng: &mut ChaCha12Rng,
    horizon: u32,
    slope_cap: u32,
    constraint: &Constraint,
) -> ComplexityProfile {
    let mut increments = Vec::with_capacity(horizon as usize);
    let mut value = 0i64;
    for s in 1..=horizon {
        let lo = constraint.min_increment(s, value).min(slope_cap as i64) as u32;
        let inc = rng.random_range(lo..=slope_cap);
        increments.push(inc);
        value += inc as i64;
    }
    ComplexityProfile::new(horizon, slope_cap, increments).unwrap()
}

// ---------------------------------------------------------------------------
// Verification sweeps.
// ---------------------------------------------------------------------------

/// Evaluate the spec's theorem on one profile, feeding every report to `sink`.
fn evaluate_profile<F: FnMut(&BoundReport)>(
    spec: &SearchSpec,
    profile: &ComplexityProfile,
    sink: &mut F,
) -> Result<u64> {
    let r = spec.horizon;
    let mut evaluations = 0;
    match spec.theorem {
        TheoremId::ProjMain => {
            for t in 1..=r {
                let report = projection_upper_bound(profile, r, Rat::int(t as i64), Mode::Idealized)?;
                sink(&report);
                evaluations += 1;
            }
        }
        TheoremId::ProjPartition => {
            for t in 1..=r {
                let t_rat = Rat::int(t as i64);
                let budget = crate::bounds::interval_budget(r, t_rat);
                let partition =
                    admissible_partition(profile, Rat::ZERO, Rat::int(r as i64), t_rat, budget)?;
                let report =
                    partition_projection_report(profile, &partition, r, Mode::Idealized)?;
                sink(&report);
                evaluations += 1;
            }
        }
        TheoremId::DistMain => {
            let report = distance_lower_bound(profile, r, Mode::Idealized)?;
            sink(&report);
            evaluations += 1;
        }
        TheoremId::DistPartition => {
            let report = partition_distance_report(profile, r, Mode::Idealized)?;
            sink(&report);
            evaluations += 1;
        }
        TheoremId::PinnedEffDim => {
            let d = spec.pinned_dimension()?;
            let report = pinned_effdim_bound(profile, d, r, Mode::Idealized)?;
            sink(&report);
            evaluations += 1;
        }
    }
    Ok(evaluations)
}

#[derive(Clone)]
struct Accumulator {
    profiles: u64,
    evaluations: u64,
    counterexamples: Vec<Counterexample>,
    best: Option<GapWitness>,
}

impl Accumulator {
    fn new() -> Accumulator {
        Accumulator {
            profiles: 0,
            evaluations: 0,
            counterexamples: Vec::new(),
            best: None,
        }
    }

    fn absorb_report(&mut self, profile: &ComplexityProfile, report: &BoundReport) {
        let gap = report.gap();
        let witness = GapWitness {
            increments: profile.increments().to_vec(),
            r: report.params.r,
            t: report.params.t,
            gap,
            guaranteed: report.guaranteed,
            certified: report.certified,
        };
        if gap.is_negative() {
            self.counterexamples.push(Counterexample {
                increments: witness.increments.clone(),
                r: witness.r,
                t: witness.t,
                guaranteed: report.guaranteed,
                certified: report.certified,
                gap,
            });
        }
        if self.best.as_ref().map_or(true, |b| witness_lt(&witness, b)) {
            self.best = Some(witness);
        }
    }

    fn merge(mut self, other: Accumulator) -> Accumulator {
        self.profiles += other.profiles;
        self.evaluations += other.evaluations;
        self.counterexamples.extend(other.counterexamples);
        match (&self.best, other.best) {
            (None, b) => self.best = b,
            (Some(a), Some(b)) if witness_lt(&b, a) => self.best = Some(b),
            _ => {}
        }
        self
    }
}

/// Total order on gap witnesses so parallel merges are deterministic.
fn witness_lt(a: &GapWitness, b: &GapWitness) -> bool {
    (a.gap, &a.increments, a.t)
        .cmp(&(b.gap, &b.increments, b.t))
        .is_lt()
}

fn finish(spec: &SearchSpec, mut acc: Accumulator) -> SearchReport {
    acc.counterexamples
        .sort_by(|a, b| (a.gap, &a.increments, a.t).cmp(&(b.gap, &b.increments, b.t)));
    SearchReport {
        spec: spec.clone(),
        profiles_checked: acc.profiles,
        evaluations: acc.evaluations,
        counterexamples: acc.counterexamples,
        min_gap: acc.best.as_ref().map(|b| b.gap),
        argmin: acc.best,
    }
}

/// Run the spec's theorem over its profile space, reporting the minimum gap
/// and every violation found. The profile space is sharded by increment
/// prefix across worker threads; shard reports merge associatively.
pub fn verify_theorem(spec: &SearchSpec) -> Result<SearchReport> {
    spec.guard()?;
    match spec.mode {
        SearchMode::Exhaustive => {
            let total = spec.space_size() as u64;
            let shards = (rayon::current_num_threads() as u64 * 8).min(total).max(1);
            let chunk = total.div_ceil(shards);
            let acc = (0..shards)
                .into_par_iter()
                .map(|shard| {
                    let lo = shard * chunk;
                    let hi = ((shard + 1) * chunk).min(total);
                    let mut acc = Accumulator::new();
                    for index in lo..hi {
                        let profile = profile_from_index(index, spec.horizon, spec.slope_cap);
                        if !spec.constraint.admits(&profile) {
                            continue;
                        }
                        acc.profiles += 1;
                        let n = evaluate_profile(spec, &profile, &mut |report| {
                            acc.absorb_report(&profile, report)
                        })?;
                        acc.evaluations += n;
                    }
                    Ok(acc)
                })
                .try_reduce(Accumulator::new, |a, b| Ok(a.merge(b)))?;
            Ok(finish(spec, acc))
        }
        SearchMode::Dp => {
            let acc = dp_walk(spec)?;
            Ok(finish(spec, acc))
        }
        SearchMode::Random { .. } => {
            let profiles: Vec<ComplexityProfile> = enumerate_profiles(spec)?.collect();
            let acc = profiles
                .par_iter()
                .map(|profile| {
                    let mut acc = Accumulator::new();
                    acc.profiles = 1;
                    let n = evaluate_profile(spec, profile, &mut |report| {
                        acc.absorb_report(profile, report)
                    })?;
                    acc.evaluations = n;
                    Ok(acc)
                })
                .try_reduce(Accumulator::new, |a, b| Ok(a.merge(b)))?;
            Ok(finish(spec, acc))
        }
    }
}

/// Depth-first enumeration: shares the running prefix, prunes a subtree as
/// soon as the prefix cannot satisfy the constraint any more. Top-level
/// branches run in parallel.
fn dp_walk(spec: &SearchSpec) -> Result<Accumulator> {
    let cap = spec.slope_cap;
    let acc = (0..=cap)
        .into_par_iter()
        .map(|first| {
            let mut prefix = Vec::with_capacity(spec.horizon as usize);
            prefix.push(first);
            let mut acc = Accumulator::new();
            if spec.constraint.min_increment(1, 0) <= first as i64 {
                dp_recurse(spec, &mut prefix, first as i64, &mut acc)?;
            }
            Ok(acc)
        })
        .try_reduce(Accumulator::new, |a, b| Ok(a.merge(b)))?;
    Ok(acc)
}

fn dp_recurse(
    spec: &SearchSpec,
    prefix: &mut Vec<u32>,
    value: i64,
    acc: &mut Accumulator,
) -> Result<()> {
    if prefix.len() == spec.horizon as usize {
        let profile =
            ComplexityProfile::new(spec.horizon, spec.slope_cap, prefix.clone()).unwrap();
        acc.profiles += 1;
        let n = evaluate_profile(spec, &profile, &mut |report| {
            acc.absorb_report(&profile, report)
        })?;
        acc.evaluations += n;
        return Ok(());
    }
    let s = prefix.len() as u32 + 1;
    let lo = spec.constraint.min_increment(s, value);
    if lo > spec.slope_cap as i64 {
        return Ok(()); // the whole subtree is infeasible
    }
    for inc in lo as u32..=spec.slope_cap {
        prefix.push(inc);
        dp_recurse(spec, prefix, value + inc as i64, acc)?;
        prefix.pop();
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Tightness frontier.
// ---------------------------------------------------------------------------

/// The `k` smallest-gap evaluations, ascending.
pub fn tightness_frontier(spec: &SearchSpec, k: usize) -> Result<Vec<GapWitness>> {
    spec.guard()?;
    let mut all: Vec<GapWitness> = Vec::new();
    for profile in enumerate_profiles(spec)? {
        evaluate_profile(spec, &profile, &mut |report| {
            all.push(GapWitness {
                increments: profile.increments().to_vec(),
                r: report.params.r,
                t: report.params.t,
                gap: report.gap(),
                guaranteed: report.guaranteed,
                certified: report.certified,
            });
        })?;
        // Keep memory bounded on big sweeps.
        if all.len() > 4 * k.max(64) {
            all.sort_by(|a, b| (a.gap, &a.increments, a.t).cmp(&(b.gap, &b.increments, b.t)));
            all.truncate(k.max(64));
        }
    }
    all.sort_by(|a, b| (a.gap, &a.increments, a.t).cmp(&(b.gap, &b.increments, b.t)));
    all.truncate(k);
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(theorem: TheoremId, horizon: u32, constraint: Constraint, mode: SearchMode) -> SearchSpec {
        SearchSpec {
            horizon,
            slope_cap: 2,
            constraint,
            theorem,
            mode,
        }
    }

    #[test]
    fn enumerate_counts() {
        let s = spec(TheoremId::ProjMain, 2, Constraint::None, SearchMode::Exhaustive);
        assert_eq!(enumerate_profiles(&s).unwrap().count(), 9);
        let s = spec(TheoremId::ProjMain, 1, Constraint::None, SearchMode::Exhaustive);
        assert_eq!(enumerate_profiles(&s).unwrap().count(), 3);
        let s = spec(TheoremId::ProjMain, 2, Constraint::DimGt1, SearchMode::Exhaustive);
        let profiles: Vec<Vec<u32>> = enumerate_profiles(&s)
            .unwrap()
            .map(|p| p.increments().to_vec())
            .collect();
        assert_eq!(
            profiles,
            vec![vec![1, 1], vec![1, 2], vec![2, 0], vec![2, 1], vec![2, 2]]
        );
    }

    #[test]
    fn guard_rejects_huge_spaces() {
        let s = spec(TheoremId::ProjMain, 64, Constraint::None, SearchMode::Exhaustive);
        assert!(matches!(
            enumerate_profiles(&s).err(),
            Some(Error::Capacity { .. })
        ));
    }

    #[test]
    fn verify_finds_no_projection_counterexamples_small() {
        let s = spec(TheoremId::ProjMain, 6, Constraint::DimGt1, SearchMode::Exhaustive);
        let report = verify_theorem(&s).unwrap();
        assert!(report.counterexamples.is_empty());
        assert!(report.min_gap.unwrap() >= Rat::ZERO);
    }

    #[test]
    fn verify_distance_small() {
        let s = spec(TheoremId::DistMain, 6, Constraint::DimGt1, SearchMode::Exhaustive);
        let report = verify_theorem(&s).unwrap();
        assert!(report.counterexamples.is_empty());
    }

    #[test]
    fn peak_profile_is_a_tightness_witness() {
        let s = spec(TheoremId::ProjMain, 4, Constraint::DimGt1, SearchMode::Exhaustive);
        let report = verify_theorem(&s).unwrap();
        assert_eq!(report.min_gap, Some(Rat::ZERO));
        let frontier = tightness_frontier(&s, 1000).unwrap();
        assert!(frontier
            .iter()
            .any(|w| w.increments == vec![2, 2, 0, 0] && w.t == Some(Rat::int(2)) && w.gap.is_zero()));
        assert!(frontier.windows(2).all(|w| w[0].gap <= w[1].gap));
    }

    #[test]
    fn dp_and_exhaustive_agree() {
        for theorem in [TheoremId::ProjMain, TheoremId::DistMain] {
            let ex = verify_theorem(&spec(
                theorem,
                5,
                Constraint::DimGt1,
                SearchMode::Exhaustive,
            ))
            .unwrap();
            let dp = verify_theorem(&spec(theorem, 5, Constraint::DimGt1, SearchMode::Dp)).unwrap();
            assert_eq!(ex.min_gap, dp.min_gap);
            assert_eq!(ex.profiles_checked, dp.profiles_checked);
            assert_eq!(ex.evaluations, dp.evaluations);
            assert_eq!(
                ex.argmin.as_ref().map(|w| &w.increments),
                dp.argmin.as_ref().map(|w| &w.increments)
            );
        }
    }

    #[test]
    fn random_mode_is_reproducible() {
        let mode = SearchMode::Random { seed: 7, count: 50 };
        let s = spec(TheoremId::DistMain, 8, Constraint::DimGt1, mode);
        let a = verify_theorem(&s).unwrap();
        let b = verify_theorem(&s).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.profiles_checked, 50);
    }

    #[test]
    fn pinned_requires_dimension_constraint() {
        let s = spec(TheoremId::PinnedEffDim, 6, Constraint::None, SearchMode::Exhaustive);
        assert!(verify_theorem(&s).is_err());
    }

    #[test]
    fn frontier_empty_space() {
        // Nothing satisfies f(s) >= 3s under cap 2.
        let s = spec(
            TheoremId::DistMain,
            4,
            Constraint::DimGeD { d: Rat::int(3) },
            SearchMode::Exhaustive,
        );
        assert!(tightness_frontier(&s, 10).unwrap().is_empty());
    }
}
