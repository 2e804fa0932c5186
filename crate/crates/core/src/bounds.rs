//! Evaluation of the quantitative bounds certified by partitions.
//!
//! Every operation returns a [`BoundReport`] carrying the value the relevant
//! theorem guarantees and the value the constructed partition actually
//! certifies, in idealized mode (no slack) or slack mode (a user-chosen
//! `epsilon * r + c * ceil(log2 r)` loosening of the guarantee).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{
    admissible_partition, good_partition, no_rgb_admissible_partition_with,
    rgb_partition, Partition, PartitionRule, RgbColor, RgbPartition,
};
use crate::profile::ComplexityProfile;
use crate::rational::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremId {
    ProjPartition,
    ProjMain,
    DistPartition,
    DistMain,
    PinnedEffDim,
}

impl TheoremId {
    /// Upper-bound theorems promise `certified <= guaranteed`; lower-bound
    /// theorems promise `certified >= guaranteed`.
    pub fn is_upper_bound(&self) -> bool {
        matches!(
            self,
            TheoremId::ProjPartition | TheoremId::ProjMain | TheoremId::DistPartition
        )
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::ProjPartition => "proj-partition",
            TheoremId::ProjMain => "proj-main",
            TheoremId::DistPartition => "dist-partition",
            TheoremId::DistMain => "dist-main",
            TheoremId::PinnedEffDim => "pinned-effdim",
        }
    }
}

impl std::str::FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<TheoremId> {
        match s {
            "proj-partition" => Ok(TheoremId::ProjPartition),
            "proj-main" => Ok(TheoremId::ProjMain),
            "dist-partition" => Ok(TheoremId::DistPartition),
            "dist-main" => Ok(TheoremId::DistMain),
            "pinned-effdim" => Ok(TheoremId::PinnedEffDim),
            other => Err(Error::parse(format!("unknown theorem id {other:?}"))),
        }
    }
}

/// Idealized mode treats the inequalities as exact; slack mode widens the
/// guaranteed side by `epsilon * r + log_coeff * ceil(log2 r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Mode {
    Idealized,
    Slack { epsilon: Rat, log_coeff: Rat },
}

impl Mode {
    fn slack(&self, r: u32) -> Rat {
        match self {
            Mode::Idealized => Rat::ZERO,
            Mode::Slack { epsilon, log_coeff } => {
                *epsilon * Rat::int(r as i64) + *log_coeff * Rat::int(ceil_log2(r))
            }
        }
    }
}

fn strs(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn ceil_log2(r: u32) -> i64 {
    (64 - (r.max(1) as u64).next_power_of_two().leading_zeros() - 1) as i64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub r: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<Rat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<Rat>,
    #[serde(flatten)]
    pub mode: Mode,
    /// Hypotheses about the ambient direction/oracle that carry no profile
    /// content; recorded, never checked against data.
    pub assumed: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Partition { partition: Partition },
    Rgb { rgb: RgbPartition },
}

/// Result of evaluating one bound on one profile.
///
/// The theorems promise `certified <= guaranteed` for upper bounds and
/// `certified >= guaranteed` for lower bounds; `holds` records whether this
/// evaluation satisfied that, so the adversary can report violations instead
/// of crashing on them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub guaranteed: Rat,
    pub certified: Rat,
    pub holds: bool,
    /// True when the evaluation sat on the boundary the strict hypotheses
    /// leave open (for example `f(r) = r` exactly).
    pub boundary_case: bool,
    pub params: BoundParams,
    pub witness: Witness,
}

impl BoundReport {
    fn new(
        theorem: TheoremId,
        guaranteed: Rat,
        certified: Rat,
        boundary_case: bool,
        params: BoundParams,
        witness: Witness,
    ) -> BoundReport {
        let holds = if theorem.is_upper_bound() {
            certified <= guaranteed
        } else {
            certified >= guaranteed
        };
        BoundReport {
            theorem,
            guaranteed,
            certified,
            holds,
            boundary_case,
            params,
            witness,
        }
    }

    /// Signed slack of the theorem on this evaluation; negative means the
    /// claimed inequality failed.
    pub fn gap(&self) -> Rat {
        if self.theorem.is_upper_bound() {
            self.guaranteed - self.certified
        } else {
            self.certified - self.guaranteed
        }
    }

    /// Fixed-column CSV row: `theorem_id,r,t,d,guaranteed,certified`.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.theorem.as_str(),
            self.params.r,
            self.params.t.map(|t| t.to_string()).unwrap_or_default(),
            self.params.d.map(|d| d.to_string()).unwrap_or_default(),
            self.guaranteed,
            self.certified
        )
    }
}

pub const CSV_HEADER: &str = "theorem_id,r,t,d,guaranteed,certified";

/// Budget `3 * ceil(r / t)` used for admissible partitions of `[0, r]`.
pub fn interval_budget(r: u32, t: Rat) -> usize {
    (3 * (Rat::int(r as i64) / t).ceil()) as usize
}

fn require_diagonal(profile: &ComplexityProfile, r: u32, condition: &str) -> Result<()> {
    if !(0..=r).all(|s| profile.gap_at(s) >= 0) {
        return Err(Error::contract(format!(
            "{condition}: profile must satisfy f(s) >= s for all s <= {r}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Partition-level bounds.
// ---------------------------------------------------------------------------

/// Sum over the non-teal pieces of `f(b) - f(a) - (b - a)`: the amount of
/// conditional information the partition fails to squeeze out.
pub fn partition_projection_bound(
    profile: &ComplexityProfile,
    partition: &Partition,
    r: u32,
) -> Result<Rat> {
    if partition.is_empty()
        || partition.breakpoints[0] != Rat::ZERO
        || *partition.breakpoints.last().unwrap() != Rat::int(r as i64)
    {
        return Err(Error::contract(format!("partition does not cover [0, {r}]")));
    }
    partition.verify(profile)?;
    partition.bad_jump_excess(profile)
}

/// [`partition_projection_bound`] packaged against its coarse length bound
/// `(slope_cap - 1) * B`.
pub fn partition_projection_report(
    profile: &ComplexityProfile,
    partition: &Partition,
    r: u32,
    mode: Mode,
) -> Result<BoundReport> {
    let certified = partition_projection_bound(profile, partition, r)?;
    let bad = partition.bad_length();
    let guaranteed =
        Rat::int(profile.slope_cap() as i64 - 1) * bad + mode.slack(r);
    let t = match &partition.rule {
        PartitionRule::A { t, .. } => Some(*t),
        PartitionRule::G { .. } => None,
    };
    Ok(BoundReport::new(
        TheoremId::ProjPartition,
        guaranteed,
        certified,
        false,
        BoundParams {
            r,
            t,
            d: None,
            mode,
            assumed: vec![],
        },
        Witness::Partition {
            partition: partition.clone(),
        },
    ))
}

/// Good-partition analogue of [`partition_projection_report`] on `[1, r]`.
pub fn partition_distance_report(
    profile: &ComplexityProfile,
    r: u32,
    mode: Mode,
) -> Result<BoundReport> {
    let partition = good_partition(profile, r)?;
    let certified = partition.bad_jump_excess(profile)?;
    let guaranteed =
        Rat::int(profile.slope_cap() as i64 - 1) * partition.bad_length() + mode.slack(r);
    Ok(BoundReport::new(
        TheoremId::DistPartition,
        guaranteed,
        certified,
        false,
        BoundParams {
            r,
            t: None,
            d: None,
            mode,
            assumed: vec![],
        },
        Witness::Partition { partition },
    ))
}

// ---------------------------------------------------------------------------
// Projection bound.
// ---------------------------------------------------------------------------

/// Replay of the projection case analysis at precision `r`, scale `t`.
///
/// When the decomposition contains consecutive green pieces spanning at least
/// `t` (a red-green-blue sequence always forces one, but they also occur
/// without the blue flank), the earliest such pair yields
/// `min{f(r) - B - t, B}` where `B` is the non-teal length of the composite
/// partition around the pair. Otherwise every green component is a single
/// short tile, no red-green-blue sequence can exist, and the all-yellow
/// construction certifies `sum of (jump - length)` over its non-teal pieces
/// (equal to `f(r) - r` when every piece is yellow). The guaranteed value is
/// `f(r) - (r + t)/2`.
pub fn projection_upper_bound(
    profile: &ComplexityProfile,
    r: u32,
    t: Rat,
    mode: Mode,
) -> Result<BoundReport> {
    if r < 1 || r > profile.horizon() {
        return Err(Error::domain(format!(
            "r = {r} outside [1, {}]",
            profile.horizon()
        )));
    }
    if t <= Rat::ZERO || t > Rat::int(r as i64) {
        return Err(Error::contract(format!("P2: t = {t} outside (0, {r}]")));
    }
    require_diagonal(profile, r, "P1")?;

    let f_r = Rat::int(profile.value_at(r));
    let r_rat = Rat::int(r as i64);
    let guaranteed = f_r - (r_rat + t) / Rat::int(2) + mode.slack(r);
    let params = BoundParams {
        r,
        t: Some(t),
        d: None,
        mode,
        assumed: strs(&["P3: direction random to precision t relative to the point"]),
    };
    let boundary = f_r == r_rat;

    let rgb = rgb_partition(profile, r, t)?;
    let budget = interval_budget(r, t);

    match earliest_green_pair(&rgb, t) {
        None => {
            // No green pair spans t, so no red-green-blue sequence exists
            // either and the all-yellow construction applies.
            let (partition, _) = no_rgb_admissible_partition_with(profile, &rgb, budget)?;
            let certified = partition.bad_jump_excess(profile)?;
            Ok(BoundReport::new(
                TheoremId::ProjMain,
                guaranteed,
                certified,
                boundary,
                params,
                Witness::Partition { partition },
            ))
        }
        Some((a, c)) => {
            let composite = composite_partition(profile, &rgb, a, c, t)?;
            let bad = composite.bad_length();
            let certified = (f_r - bad - t).min(bad);
            Ok(BoundReport::new(
                TheoremId::ProjMain,
                guaranteed,
                certified,
                boundary,
                params,
                Witness::Partition {
                    partition: composite,
                },
            ))
        }
    }
}

/// Earliest pair of consecutive green pieces `[a, b], [b, c]` with
/// `c - a >= t` (a single green piece of length exactly `t` counts, with the
/// second member empty).
fn earliest_green_pair(rgb: &RgbPartition, t: Rat) -> Option<(Rat, Rat)> {
    for (i, piece) in rgb.pieces.iter().enumerate() {
        if piece.color != RgbColor::Green {
            continue;
        }
        if piece.interval.length() == t {
            return Some((piece.interval.lo(), piece.interval.hi()));
        }
        if let Some(next) = rgb.pieces.get(i + 1) {
            if next.color == RgbColor::Green
                && next.interval.hi() - piece.interval.lo() >= t
            {
                return Some((piece.interval.lo(), next.interval.hi()));
            }
        }
    }
    None
}

/// Admissible partitions of `[0, a]` and `[c, r]` around the chosen green
/// span, concatenated with the green pieces between `a` and `c`.
fn composite_partition(
    profile: &ComplexityProfile,
    rgb: &RgbPartition,
    a: Rat,
    c: Rat,
    t: Rat,
) -> Result<Partition> {
    let r_rat = Rat::int(rgb.r as i64);
    // The paper-level count here is 10C; be generous, the count is reported.
    let budget = 4 * interval_budget(rgb.r, t);
    let mut breakpoints = Vec::new();
    let mut colors = Vec::new();

    if a > Rat::ZERO {
        let prefix = admissible_partition(profile, Rat::ZERO, a, t, budget)?;
        breakpoints.extend(prefix.breakpoints);
        colors.extend(prefix.colors);
    } else {
        breakpoints.push(Rat::ZERO);
    }
    for piece in &rgb.pieces {
        if piece.color == RgbColor::Green
            && piece.interval.lo() >= a
            && piece.interval.hi() <= c
        {
            breakpoints.push(piece.interval.hi());
            colors.push(crate::color::classify(profile, &piece.interval, t)?);
        }
    }
    if c < r_rat {
        let suffix = admissible_partition(profile, c, r_rat, t, budget)?;
        breakpoints.extend(&suffix.breakpoints[1..]);
        colors.extend(suffix.colors);
    }
    Ok(Partition {
        rule: PartitionRule::A {
            m: budget,
            r: r_rat,
            t,
        },
        breakpoints,
        colors,
    })
}

// ---------------------------------------------------------------------------
// Distance bound.
// ---------------------------------------------------------------------------

/// Lower bound on the information in a pinned distance at precision `r`,
/// certified by the good partition of `[1, r]`: with `B` the non-teal length,
/// the conditional term is `min{f(r) - B, B}` and the certified bound is
/// `f(r)` minus that. Guaranteed: `f(r) / 2`.
///
/// Both branches of the min use the point's own profile throughout.
pub fn distance_lower_bound(
    profile: &ComplexityProfile,
    r: u32,
    mode: Mode,
) -> Result<BoundReport> {
    if r < 1 || r > profile.horizon() {
        return Err(Error::domain(format!(
            "r = {r} outside [1, {}]",
            profile.horizon()
        )));
    }
    require_diagonal(profile, r, "D1")?;

    let partition = good_partition(profile, r)?;
    let f_r = Rat::int(profile.value_at(r));
    let bad = partition.bad_length();
    let conditional = (f_r - bad).min(bad);
    let certified = f_r - conditional;
    let guaranteed = f_r / Rat::int(2) - mode.slack(r);
    Ok(BoundReport::new(
        TheoremId::DistMain,
        guaranteed,
        certified,
        false,
        BoundParams {
            r,
            t: None,
            d: None,
            mode,
            assumed: strs(&[
                "D2: the point is incompressible relative to the pin",
                "D3: the pin direction is random given the point",
            ]),
        },
        Witness::Partition { partition },
    ))
}

// ---------------------------------------------------------------------------
// Pinned effective-dimension bound.
// ---------------------------------------------------------------------------

/// Bootstrap composition: pick the pivot precision
/// `t = max{s < r : f(s) <= d*r/2}`, certify the distance bound there, and add
/// the projection-driven tail `r/2`. Guaranteed: `d*r/4 + r/2`.
pub fn pinned_effdim_bound(
    profile: &ComplexityProfile,
    d: Rat,
    r: u32,
    mode: Mode,
) -> Result<BoundReport> {
    if r < 2 || r > profile.horizon() {
        return Err(Error::domain(format!(
            "r = {r} outside [2, {}]",
            profile.horizon()
        )));
    }
    if d.is_negative() {
        return Err(Error::contract("C3: d must be non-negative"));
    }
    if !profile.has_dim_at_least(d, 0) {
        return Err(Error::contract(format!(
            "C3: profile does not satisfy f(s) >= {d}*s"
        )));
    }

    let r_rat = Rat::int(r as i64);
    let half_target = d * r_rat / Rat::int(2);
    let pivot = (0..r)
        .rev()
        .find(|&s| Rat::int(profile.value_at(s)) <= half_target)
        .ok_or_else(|| Error::contract("no pivot precision: f exceeds d*r/2 immediately"))?;
    if pivot < 1 {
        return Err(Error::contract("pivot precision vanished"));
    }
    // With the default cap, f(s) <= 2s forces the pivot to at least floor(r/4).
    if profile.slope_cap() <= 2 && d >= Rat::ONE && (pivot as i64) < r as i64 / 4 {
        return Err(Error::structure(format!(
            "pivot {pivot} fell below floor(r/4) = {}",
            r / 4
        )));
    }

    let distance = distance_lower_bound(profile, pivot, Mode::Idealized)?;
    let certified = distance.certified + r_rat / Rat::int(2);
    let guaranteed = d * r_rat / Rat::int(4) + r_rat / Rat::int(2) - mode.slack(r);
    let boundary = Rat::int(profile.value_at(pivot)) != half_target;
    let witness = distance.witness;
    Ok(BoundReport::new(
        TheoremId::PinnedEffDim,
        guaranteed,
        certified,
        boundary,
        BoundParams {
            r,
            t: Some(Rat::int(pivot as i64)),
            d: Some(d),
            mode,
            assumed: strs(&[
                "C1: pin has dimension above one",
                "C2: pin-to-point direction random relative to the pin",
                "C4: point incompressible relative to the pin",
                "C5: direction random given the point",
            ]),
        },
        witness,
    ))
}

/// Normalized (divided by `r`) guaranteed and certified values.
pub fn normalized(report: &BoundReport) -> (Rat, Rat) {
    let r = Rat::int(report.params.r as i64);
    (report.guaranteed / r, report.certified / r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Interval;

    fn p(incs: &[u32]) -> ComplexityProfile {
        ComplexityProfile::from_increments(incs.to_vec()).unwrap()
    }

    #[test]
    fn partition_bound_examples() {
        let profile = p(&[2, 2, 0, 0]);
        let two_pieces =
            admissible_partition(&profile, Rat::ZERO, Rat::int(4), Rat::int(2), 6).unwrap();
        assert_eq!(
            partition_projection_bound(&profile, &two_pieces, 4).unwrap(),
            Rat::int(2)
        );

        // Partition {[0,1], [1,3], [3,4]}: only [0,1] is non-teal.
        let manual = Partition {
            rule: PartitionRule::A {
                m: 6,
                r: Rat::int(4),
                t: Rat::int(2),
            },
            breakpoints: vec![Rat::ZERO, Rat::ONE, Rat::int(3), Rat::int(4)],
            colors: vec![
                crate::color::classify(
                    &profile,
                    &Interval::new(Rat::ZERO, Rat::ONE).unwrap(),
                    Rat::int(2),
                )
                .unwrap(),
                crate::color::classify(
                    &profile,
                    &Interval::new(Rat::ONE, Rat::int(3)).unwrap(),
                    Rat::int(2),
                )
                .unwrap(),
                crate::color::classify(
                    &profile,
                    &Interval::new(Rat::int(3), Rat::int(4)).unwrap(),
                    Rat::int(2),
                )
                .unwrap(),
            ],
        };
        assert_eq!(
            partition_projection_bound(&profile, &manual, 4).unwrap(),
            Rat::ONE
        );

        let zero = ComplexityProfile::zero(4);
        let teal_only =
            admissible_partition(&zero, Rat::ZERO, Rat::int(4), Rat::int(2), 6).unwrap();
        assert_eq!(
            partition_projection_bound(&zero, &teal_only, 4).unwrap(),
            Rat::ZERO
        );
    }

    #[test]
    fn projection_bound_tight_on_peak() {
        let profile = p(&[2, 2, 0, 0]);
        let report =
            projection_upper_bound(&profile, 4, Rat::int(2), Mode::Idealized).unwrap();
        assert_eq!(report.certified, Rat::ONE);
        assert_eq!(report.guaranteed, Rat::ONE);
        assert!(report.holds);
        assert_eq!(report.gap(), Rat::ZERO);
    }

    #[test]
    fn projection_bound_identity() {
        let profile = ComplexityProfile::identity(8);
        let report =
            projection_upper_bound(&profile, 8, Rat::int(2), Mode::Idealized).unwrap();
        assert_eq!(report.certified, Rat::ZERO);
        assert_eq!(report.guaranteed, Rat::int(3));
        assert!(report.boundary_case);
    }

    #[test]
    fn projection_bound_double_slope() {
        let profile = p(&[2; 8]);
        let report =
            projection_upper_bound(&profile, 8, Rat::int(2), Mode::Idealized).unwrap();
        // All-yellow construction certifies f(8) - 8 = 8 against guarantee 11.
        assert_eq!(report.certified, Rat::int(8));
        assert_eq!(report.guaranteed, Rat::int(11));
        assert!(report.holds);
    }

    #[test]
    fn projection_bound_rejects_shallow_profiles() {
        let profile = ComplexityProfile::zero(4);
        let err = projection_upper_bound(&profile, 4, Rat::int(2), Mode::Idealized).unwrap_err();
        assert!(matches!(err, Error::Contract(msg) if msg.starts_with("P1")));
    }

    #[test]
    fn distance_bound_examples() {
        let profile = p(&[2, 2, 0, 0]);
        let report = distance_lower_bound(&profile, 4, Mode::Idealized).unwrap();
        assert_eq!(report.certified, Rat::int(3));
        assert_eq!(report.guaranteed, Rat::int(2));
        assert!(report.holds);

        let identity = ComplexityProfile::identity(8);
        let report = distance_lower_bound(&identity, 8, Mode::Idealized).unwrap();
        assert_eq!(report.certified, Rat::int(8));
        assert_eq!(report.guaranteed, Rat::int(4));

        let double = p(&[2; 8]);
        let report = distance_lower_bound(&double, 8, Mode::Idealized).unwrap();
        // B = 7, so min{16 - 7, 7} = 7 and the certified value is 9.
        assert_eq!(report.certified, Rat::int(9));
        assert_eq!(report.guaranteed, Rat::int(8));
    }

    #[test]
    fn pinned_bound_pivot_and_values() {
        let identity = ComplexityProfile::identity(8);
        let report =
            pinned_effdim_bound(&identity, Rat::ONE, 8, Mode::Idealized).unwrap();
        assert_eq!(report.params.t, Some(Rat::int(4)));
        let (guaranteed, _) = normalized(&report);
        assert_eq!(guaranteed, Rat::new(3, 4));
        assert!(report.holds);

        let double = p(&[2; 8]);
        let report =
            pinned_effdim_bound(&double, Rat::int(2), 8, Mode::Idealized).unwrap();
        assert_eq!(report.params.t, Some(Rat::int(4)));
        let (guaranteed, _) = normalized(&report);
        assert_eq!(guaranteed, Rat::ONE);
        assert!(report.holds);
    }

    #[test]
    fn pinned_bound_scaled_line() {
        let profile = ComplexityProfile::ceil_line(Rat::new(6, 5), 40, 2).unwrap();
        let report =
            pinned_effdim_bound(&profile, Rat::new(6, 5), 40, Mode::Idealized).unwrap();
        let (guaranteed, certified) = normalized(&report);
        assert_eq!(guaranteed, Rat::new(4, 5));
        assert!(certified >= guaranteed);
    }

    #[test]
    fn pinned_guarantee_monotone_in_d() {
        let profile = p(&[2; 12]);
        let mut last = Rat::ZERO;
        for d in [Rat::ONE, Rat::new(3, 2), Rat::int(2)] {
            let report = pinned_effdim_bound(&profile, d, 12, Mode::Idealized).unwrap();
            assert!(report.guaranteed >= last);
            last = report.guaranteed;
        }
    }

    #[test]
    fn slack_mode_widens_guarantees() {
        let profile = p(&[2, 2, 0, 0]);
        let slack = Mode::Slack {
            epsilon: Rat::new(1, 10),
            log_coeff: Rat::ONE,
        };
        let idealized =
            projection_upper_bound(&profile, 4, Rat::int(2), Mode::Idealized).unwrap();
        let slacked = projection_upper_bound(&profile, 4, Rat::int(2), slack).unwrap();
        // epsilon*r + c*ceil(log2 r) = 2/5 + 2.
        assert_eq!(
            slacked.guaranteed - idealized.guaranteed,
            Rat::new(12, 5)
        );
        assert_eq!(slacked.certified, idealized.certified);
    }

    #[test]
    fn csv_rows_are_fixed_format() {
        let profile = p(&[2, 2, 0, 0]);
        let report =
            projection_upper_bound(&profile, 4, Rat::int(2), Mode::Idealized).unwrap();
        assert_eq!(report.csv_row(), "proj-main,4,2/1,,1/1,1/1");
    }
}
