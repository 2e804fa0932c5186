//! Partition procedures over colored intervals.
//!
//! Everything here works on `g(u) = f(u) - u`, which is piecewise linear with
//! integer breakpoints. All greedy "take the largest feasible right endpoint"
//! steps are computed exactly: on each linear piece the defining inequalities
//! are linear in the endpoint, so the feasible sets are finite unions of
//! closed rational intervals and the maxima are attained at rational points.

use serde::{Deserialize, Serialize};

use crate::color::{classify, ColorSet};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::profile::ComplexityProfile;
use crate::rational::Rat;

/// Rule a partition was built under. `A` is the bounded-count, bounded-length
/// rule; `G` is the doubling rule used on `[1, r]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule")]
pub enum PartitionRule {
    A { m: usize, r: Rat, t: Rat },
    G { r: u32 },
}

/// An ordered partition of an interval into colored pieces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    #[serde(flatten)]
    pub rule: PartitionRule,
    /// Strictly increasing; piece `i` is `[breakpoints[i], breakpoints[i+1]]`.
    pub breakpoints: Vec<Rat>,
    pub colors: Vec<ColorSet>,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn interval(&self, i: usize) -> Interval {
        Interval::new(self.breakpoints[i], self.breakpoints[i + 1]).unwrap()
    }

    pub fn intervals(&self) -> impl Iterator<Item = Interval> + '_ {
        (0..self.len()).map(|i| self.interval(i))
    }

    /// Total length of the non-teal pieces.
    pub fn bad_length(&self) -> Rat {
        (0..self.len())
            .filter(|&i| !self.colors[i].teal)
            .map(|i| self.interval(i).length())
            .sum()
    }

    /// Total length of the non-yellow pieces.
    pub fn non_yellow_length(&self) -> Rat {
        (0..self.len())
            .filter(|&i| !self.colors[i].yellow)
            .map(|i| self.interval(i).length())
            .sum()
    }

    /// Sum over non-teal pieces of `f(b) - f(a) - (b - a)`.
    pub fn bad_jump_excess(&self, profile: &ComplexityProfile) -> Result<Rat> {
        let mut total = Rat::ZERO;
        for i in 0..self.len() {
            if !self.colors[i].teal {
                let iv = self.interval(i);
                total += profile.eval(iv.hi())? - profile.eval(iv.lo())? - iv.length();
            }
        }
        Ok(total)
    }

    /// Re-derive every piece color and check the construction rule.
    pub fn verify(&self, profile: &ComplexityProfile) -> Result<()> {
        for w in self.breakpoints.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::structure("breakpoints not strictly increasing"));
            }
        }
        if self.breakpoints.len() != self.colors.len() + 1 && !(self.is_empty() && self.breakpoints.len() == 1) {
            return Err(Error::structure("breakpoint/color count mismatch"));
        }
        let t = match &self.rule {
            PartitionRule::A { t, .. } => *t,
            PartitionRule::G { r } => Rat::int(*r as i64),
        };
        for i in 0..self.len() {
            let iv = self.interval(i);
            let c = classify(profile, &iv, t)?;
            if c != self.colors[i] {
                return Err(Error::structure(format!("stored color of {iv:?} is stale")));
            }
            if !c.yellow && !c.teal {
                return Err(Error::structure(format!("{iv:?} is neither yellow nor teal")));
            }
            match &self.rule {
                PartitionRule::A { t, .. } => {
                    if iv.length() > *t {
                        return Err(Error::structure(format!("{iv:?} longer than t")));
                    }
                }
                PartitionRule::G { .. } => {
                    if iv.hi() > Rat::int(2) * iv.lo() {
                        return Err(Error::structure(format!("{iv:?} violates the doubling rule")));
                    }
                }
            }
        }
        if let PartitionRule::A { m, .. } = &self.rule {
            if self.len() > m + 1 {
                return Err(Error::Admissibility {
                    achieved: self.len().saturating_sub(1),
                    max: *m,
                });
            }
        }
        Ok(())
    }
}

/// One piece of the red/blue/green decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RgbColor {
    Red,
    Blue,
    Green,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RgbPiece {
    pub interval: Interval,
    pub color: RgbColor,
}

/// Decomposition of `[0, r]` into red, blue and green pieces with disjoint
/// interiors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RgbPartition {
    pub r: u32,
    pub t: Rat,
    pub pieces: Vec<RgbPiece>,
}

impl RgbPartition {
    /// Index ranges of the maximal runs of consecutive green pieces.
    pub fn green_runs(&self) -> Vec<std::ops::Range<usize>> {
        let mut runs = Vec::new();
        let mut i = 0;
        while i < self.pieces.len() {
            if self.pieces[i].color == RgbColor::Green {
                let start = i;
                while i < self.pieces.len() && self.pieces[i].color == RgbColor::Green {
                    i += 1;
                }
                runs.push(start..i);
            } else {
                i += 1;
            }
        }
        runs
    }

    pub fn first_piece_of(&self, color: RgbColor) -> Option<&RgbPiece> {
        self.pieces.iter().find(|p| p.color == color)
    }
}

/// A run of consecutive green pieces flanked by a red piece on the left and a
/// blue piece on the right.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreenRun {
    pub run: Vec<Interval>,
    pub flanked_by: (Interval, Interval),
    pub total_length: Rat,
}

// ---------------------------------------------------------------------------
// Greedy endpoint scans.
// ---------------------------------------------------------------------------

/// Largest `d` in `[c, cap]` such that `[c, d]` is yellow, i.e. such that
/// `g` stays at or above `g(c)` on all of `[c, d]`. Returns `c` itself when
/// `g` drops immediately.
pub(crate) fn max_yellow_end(profile: &ComplexityProfile, c: Rat, cap: Rat) -> Result<Rat> {
    let target = profile.gap(c)?;
    let mut pos = c;
    let mut g_pos = target;
    while pos < cap {
        let seg_end = Rat::int(pos.floor() + 1).min(cap);
        let g_end = profile.gap(seg_end)?;
        if g_end >= target {
            pos = seg_end;
            g_pos = g_end;
        } else {
            // g is linear on [pos, seg_end] and crosses the target level.
            let crossing =
                pos + (target - g_pos) * (seg_end - pos) / (g_end - g_pos);
            return Ok(crossing);
        }
    }
    Ok(cap)
}

/// Largest `d` in `[c, cap]` such that `[c, d]` is teal, i.e. such that `g(d)`
/// is a running minimum of `g` over `[c, d]`. Returns `c` when no extension
/// is teal.
pub(crate) fn max_teal_end(profile: &ComplexityProfile, c: Rat, cap: Rat) -> Result<Rat> {
    let mut running_min = profile.gap(c)?;
    let mut best = c;
    let mut pos = c;
    let mut g_pos = running_min;
    while pos < cap {
        let seg_end = Rat::int(pos.floor() + 1).min(cap);
        let g_end = profile.gap(seg_end)?;
        // On a non-increasing piece the deepest point is its right end; on an
        // increasing piece no point beyond the start can be a running minimum.
        if g_end <= g_pos && g_end <= running_min {
            best = seg_end;
        }
        running_min = running_min.min(g_end);
        pos = seg_end;
        g_pos = g_end;
    }
    Ok(best)
}

/// Largest `d` in `(c, cap]` such that `[c, d]` is green: `g` stays at or
/// above `g(c)` and returns to exactly that level at `d`.
pub(crate) fn max_green_end(profile: &ComplexityProfile, c: Rat, cap: Rat) -> Result<Option<Rat>> {
    let level = profile.gap(c)?;
    let mut last_touch = c;
    let mut pos = c;
    let mut g_pos = level;
    while pos < cap {
        let seg_end = Rat::int(pos.floor() + 1).min(cap);
        let g_end = profile.gap(seg_end)?;
        if g_end < level {
            // Crossing point back down to the level; nothing green after it.
            let crossing =
                pos + (level - g_pos) * (seg_end - pos) / (g_end - g_pos);
            if crossing > last_touch {
                last_touch = crossing;
            }
            break;
        }
        if g_end == level {
            last_touch = seg_end;
        }
        pos = seg_end;
        g_pos = g_end;
    }
    Ok(if last_touch > c { Some(last_touch) } else { None })
}

// ---------------------------------------------------------------------------
// Admissible partitions.
// ---------------------------------------------------------------------------

/// Greedy construction of an `(M, r, t)`-admissible partition of `[a, b]`:
/// from each cursor take the largest right endpoint at distance at most `t`
/// that keeps the piece yellow or teal.
pub fn admissible_partition(
    profile: &ComplexityProfile,
    a: Rat,
    b: Rat,
    t: Rat,
    m: usize,
) -> Result<Partition> {
    if a.is_negative() || b > Rat::int(profile.horizon() as i64) || a > b {
        return Err(Error::domain(format!(
            "bad range [{a}, {b}] for horizon {}",
            profile.horizon()
        )));
    }
    if t <= Rat::ZERO {
        return Err(Error::domain("scale t must be positive"));
    }
    let mut breakpoints = vec![a];
    let mut colors = Vec::new();
    let mut cursor = a;
    while cursor < b {
        let cap = (cursor + t).min(b);
        let dy = max_yellow_end(profile, cursor, cap)?;
        let dt = max_teal_end(profile, cursor, cap)?;
        let d = dy.max(dt);
        if d <= cursor {
            return Err(Error::structure(format!(
                "greedy step stuck at {cursor} on {profile:?}"
            )));
        }
        let piece = Interval::new(cursor, d).unwrap();
        colors.push(classify(profile, &piece, t)?);
        breakpoints.push(d);
        cursor = d;
    }
    let partition = Partition {
        rule: PartitionRule::A { m, r: b, t },
        breakpoints,
        colors,
    };
    if partition.len() > m + 1 {
        return Err(Error::Admissibility {
            achieved: partition.len() - 1,
            max: m,
        });
    }
    Ok(partition)
}

/// Greedy construction of a good partition of `[1, r]`: from each cursor take
/// the largest yellow-or-teal endpoint at most twice the cursor.
pub fn good_partition(profile: &ComplexityProfile, r: u32) -> Result<Partition> {
    if r > profile.horizon() || r < 1 {
        return Err(Error::domain(format!(
            "r = {r} outside [1, {}]",
            profile.horizon()
        )));
    }
    let end = Rat::int(r as i64);
    let mut breakpoints = vec![Rat::ONE];
    let mut colors = Vec::new();
    let mut cursor = Rat::ONE;
    while cursor < end {
        let cap = (Rat::int(2) * cursor).min(end);
        let dy = max_yellow_end(profile, cursor, cap)?;
        let dt = max_teal_end(profile, cursor, cap)?;
        let d = dy.max(dt);
        if d <= cursor {
            return Err(Error::structure(format!(
                "doubling step stuck at {cursor} on {profile:?}"
            )));
        }
        let piece = Interval::new(cursor, d).unwrap();
        colors.push(classify(profile, &piece, Rat::int(r as i64))?);
        breakpoints.push(d);
        cursor = d;
    }
    Ok(Partition {
        rule: PartitionRule::G { r },
        breakpoints,
        colors,
    })
}

// ---------------------------------------------------------------------------
// The red/blue/green decomposition.
// ---------------------------------------------------------------------------

/// Union of all green intervals of `[0, r]` at scale `t`, as a sorted list of
/// disjoint closed components.
///
/// A green interval has its two endpoints at a common height `v` of `g`, stays
/// at or above `v` in between, and has length at most `t`. For every ordered
/// pair of unit segments hosting the endpoints those constraints are linear in
/// `v`, so each pair contributes a swept interval with rational endpoints;
/// the union of the sweeps is the union of all green intervals.
fn green_union(profile: &ComplexityProfile, r: u32, t: Rat) -> Result<Vec<(Rat, Rat)>> {
    let segs = r as usize;
    let g = |k: usize| Rat::int(profile.gap_at(k as u32));
    let sigma = |k: usize| profile.segment_slope(k as u32) - 1;

    let mut swept: Vec<(Rat, Rat)> = Vec::new();

    for i in 0..segs {
        if sigma(i) == 0 {
            // Any sub-interval of a level plateau is green.
            swept.push((Rat::int(i as i64), Rat::int(i as i64 + 1)));
        }
        // Interior-breakpoint minimum between the two host segments.
        let mut mid_min = Rat::int(i64::MAX / 2);
        for j in i + 1..segs {
            mid_min = mid_min.min(g(j)); // g at breakpoint j, i.e. min over {i+1..j}
            let si = sigma(i);
            let sj = sigma(j);
            match (si == 0, sj == 0) {
                (true, true) => {
                    if g(i) == g(j) && g(i) <= mid_min {
                        // a free on segment i, b free on segment j.
                        let min_sep = Rat::int(j as i64) - Rat::int(i as i64 + 1);
                        if min_sep <= t {
                            let lo = Rat::int(i as i64).max(Rat::int(j as i64) - t);
                            let hi = Rat::int(j as i64 + 1).min(Rat::int(i as i64 + 1) + t);
                            swept.push((lo, hi));
                        }
                    }
                }
                (true, false) => {
                    let v = g(i);
                    if v <= mid_min {
                        if let Some(b) = solve_on_segment(g(j), g(j + 1), sj, j, v) {
                            if b - t <= Rat::int(i as i64 + 1) {
                                let lo = Rat::int(i as i64).max(b - t);
                                if lo < b {
                                    swept.push((lo, b));
                                }
                            }
                        }
                    }
                }
                (false, true) => {
                    let v = g(j);
                    if v <= mid_min {
                        if let Some(a) = solve_on_segment(g(i), g(i + 1), si, i, v) {
                            if a + t >= Rat::int(j as i64) {
                                let hi = Rat::int(j as i64 + 1).min(a + t);
                                if a < hi {
                                    swept.push((a, hi));
                                }
                            }
                        }
                    }
                }
                (false, false) => {
                    if let Some((lo, hi)) = sweep_sloped_pair(
                        (g(i), g(i + 1), si, i),
                        (g(j), g(j + 1), sj, j),
                        mid_min,
                        t,
                    ) {
                        swept.push((lo, hi));
                    }
                }
            }
        }
    }

    swept.sort();
    let mut merged: Vec<(Rat, Rat)> = Vec::new();
    for (lo, hi) in swept {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => {
                if hi > last.1 {
                    last.1 = hi;
                }
            }
            _ => merged.push((lo, hi)),
        }
    }
    Ok(merged)
}

/// Point of segment `k` where `g` equals `v`, if any (`sk != 0`).
fn solve_on_segment(g_lo: Rat, g_hi: Rat, sk: i64, k: usize, v: Rat) -> Option<Rat> {
    if v < g_lo.min(g_hi) || v > g_lo.max(g_hi) {
        return None;
    }
    Some(Rat::int(k as i64) + (v - g_lo) / Rat::int(sk))
}

/// Swept interval for endpoint-host segments that both have nonzero `g`-slope.
fn sweep_sloped_pair(
    (gi, gi1, si, i): (Rat, Rat, i64, usize),
    (gj, gj1, sj, j): (Rat, Rat, i64, usize),
    mid_min: Rat,
    t: Rat,
) -> Option<(Rat, Rat)> {
    let mut v_lo = gi.min(gi1).max(gj.min(gj1));
    let mut v_hi = gi.max(gi1).min(gj.max(gj1)).min(mid_min);

    // Length is affine in v: len(v) = base + lambda * v.
    let inv_i = Rat::ONE / Rat::int(si);
    let inv_j = Rat::ONE / Rat::int(sj);
    let base = Rat::int(j as i64) - Rat::int(i as i64) - gj * inv_j + gi * inv_i;
    let lambda = inv_j - inv_i;

    // Constrain 0 <= len(v) <= t.
    if lambda.is_zero() {
        if base < Rat::ZERO || base > t || base.is_zero() {
            return None;
        }
    } else if lambda > Rat::ZERO {
        v_lo = v_lo.max(-base / lambda);
        v_hi = v_hi.min((t - base) / lambda);
    } else {
        v_lo = v_lo.max((t - base) / lambda);
        v_hi = v_hi.min(-base / lambda);
    }
    if v_lo > v_hi {
        return None;
    }
    let len_at = |v: Rat| base + lambda * v;
    if len_at(v_lo).is_zero() && len_at(v_hi).is_zero() {
        return None;
    }

    let a_at = |v: Rat| Rat::int(i as i64) + (v - gi) * inv_i;
    let b_at = |v: Rat| Rat::int(j as i64) + (v - gj) * inv_j;
    let lo = a_at(v_lo).min(a_at(v_hi));
    let hi = b_at(v_lo).max(b_at(v_hi));
    Some((lo, hi))
}

/// Decompose `[0, r]` into green components (tiled greedily into pieces of
/// length at most `t`) and red/blue gap pieces.
pub fn rgb_partition(profile: &ComplexityProfile, r: u32, t: Rat) -> Result<RgbPartition> {
    if r == 0 || r > profile.horizon() {
        return Err(Error::domain(format!(
            "r = {r} outside [1, {}]",
            profile.horizon()
        )));
    }
    if t <= Rat::ZERO || t > Rat::int(r as i64) {
        return Err(Error::domain(format!("t = {t} outside (0, {r}]")));
    }

    let components = green_union(profile, r, t)?;
    let mut pieces = Vec::new();
    let mut cursor = Rat::ZERO;
    for (alpha, beta) in &components {
        if cursor < *alpha {
            fill_gap(profile, cursor, *alpha, &mut pieces)?;
        }
        let mut c = *alpha;
        while c < *beta {
            let cap = (c + t).min(*beta);
            let d = max_green_end(profile, c, cap)?.ok_or_else(|| {
                Error::structure(format!(
                    "green tiling stuck at {c} in component [{alpha}, {beta}] on {profile:?}"
                ))
            })?;
            pieces.push(RgbPiece {
                interval: Interval::new(c, d).unwrap(),
                color: RgbColor::Green,
            });
            c = d;
        }
        cursor = *beta;
    }
    let end = Rat::int(r as i64);
    if cursor < end {
        fill_gap(profile, cursor, end, &mut pieces)?;
    }

    let rgb = RgbPartition { r, t, pieces };
    verify_rgb(profile, &rgb)?;
    Ok(rgb)
}

/// Classify a gap (an interval meeting no green interval) as red, blue, or a
/// blue piece followed by a red piece.
fn fill_gap(
    profile: &ComplexityProfile,
    lo: Rat,
    hi: Rat,
    pieces: &mut Vec<RgbPiece>,
) -> Result<()> {
    // Gaps contain no unit-slope material (that would be green), so the
    // constant prefix ends at an integer breakpoint or at the gap end.
    let mut split = lo;
    let mut pos = lo;
    while pos < hi {
        let seg = pos.floor();
        let seg_end = Rat::int(seg + 1).min(hi);
        match profile.segment_slope(seg as u32) {
            0 => split = seg_end,
            1 => {
                return Err(Error::structure(format!(
                    "gap [{lo}, {hi}] crosses unit-slope material on {profile:?}"
                )))
            }
            _ => break,
        }
        pos = seg_end;
    }
    // Everything after the split must be strictly super-unit.
    let mut check = split;
    while check < hi {
        let seg = check.floor();
        let seg_end = Rat::int(seg + 1).min(hi);
        if profile.segment_slope(seg as u32) <= 1 {
            return Err(Error::structure(format!(
                "gap [{lo}, {hi}] is not blue-then-red on {profile:?}"
            )));
        }
        check = seg_end;
    }
    if split > lo {
        pieces.push(RgbPiece {
            interval: Interval::new(lo, split).unwrap(),
            color: RgbColor::Blue,
        });
    }
    if split < hi {
        pieces.push(RgbPiece {
            interval: Interval::new(split, hi).unwrap(),
            color: RgbColor::Red,
        });
    }
    Ok(())
}

/// Structural checks every decomposition must satisfy: exact cover of
/// `[0, r]`, colors certified by `classify`, green pieces no longer than `t`,
/// and no red piece directly followed by a blue piece.
fn verify_rgb(profile: &ComplexityProfile, rgb: &RgbPartition) -> Result<()> {
    let mut cursor = Rat::ZERO;
    for piece in &rgb.pieces {
        if piece.interval.lo() != cursor {
            return Err(Error::structure("pieces do not tile the range"));
        }
        cursor = piece.interval.hi();
        let c = classify(profile, &piece.interval, rgb.t)?;
        let ok = match piece.color {
            RgbColor::Red => c.red,
            RgbColor::Blue => c.blue,
            RgbColor::Green => c.green,
        };
        if !ok {
            return Err(Error::structure(format!(
                "piece {:?} is not {:?} (classified {:?})",
                piece.interval, piece.color, c
            )));
        }
    }
    if cursor != Rat::int(rgb.r as i64) {
        return Err(Error::structure("pieces do not reach the right endpoint"));
    }
    for w in rgb.pieces.windows(2) {
        if w[0].color == RgbColor::Red && w[1].color == RgbColor::Blue {
            return Err(Error::structure(
                "red piece directly followed by a blue piece",
            ));
        }
    }
    Ok(())
}

/// First red-green-blue sequence of the decomposition, if any. The returned
/// run's total green length is checked to be at least `t`.
pub fn find_rgb_sequence(rgb: &RgbPartition, t: Rat) -> Result<Option<GreenRun>> {
    for run in rgb.green_runs() {
        if run.start == 0 || run.end >= rgb.pieces.len() {
            continue;
        }
        let before = &rgb.pieces[run.start - 1];
        let after = &rgb.pieces[run.end];
        if before.color == RgbColor::Red && after.color == RgbColor::Blue {
            let tiles: Vec<Interval> = rgb.pieces[run.clone()]
                .iter()
                .map(|p| p.interval)
                .collect();
            let total_length: Rat = tiles.iter().map(|iv| iv.length()).sum();
            if total_length < t {
                return Err(Error::structure(format!(
                    "red-green-blue run has green length {total_length} < {t}"
                )));
            }
            return Ok(Some(GreenRun {
                run: tiles,
                flanked_by: (before.interval, after.interval),
                total_length,
            }));
        }
    }
    Ok(None)
}

/// Admissible partition of `[0, r]` whose pieces from the first red piece on
/// are all yellow, built when the decomposition has no red-green-blue
/// sequence. Returns the partition and the total length of its non-yellow
/// pieces.
pub fn no_rgb_admissible_partition(
    profile: &ComplexityProfile,
    r: u32,
    t: Rat,
    m: usize,
) -> Result<(Partition, Rat)> {
    let rgb = rgb_partition(profile, r, t)?;
    no_rgb_admissible_partition_with(profile, &rgb, m)
}

/// As [`no_rgb_admissible_partition`], reusing an existing decomposition.
pub fn no_rgb_admissible_partition_with(
    profile: &ComplexityProfile,
    rgb: &RgbPartition,
    m: usize,
) -> Result<(Partition, Rat)> {
    let t = rgb.t;
    let r = Rat::int(rgb.r as i64);
    if find_rgb_sequence(rgb, t)?.is_some() {
        return Err(Error::contract(
            "a red-green-blue sequence exists; the all-yellow construction does not apply",
        ));
    }
    if profile.diagonal_onset().is_none() {
        return Err(Error::contract(
            "P1: profile never reaches f(s) >= s up to its horizon",
        ));
    }

    // Start of the first red piece; with no red piece the whole range is
    // walkable from 0.
    let a = rgb
        .first_piece_of(RgbColor::Red)
        .map(|p| p.interval.lo())
        .unwrap_or(Rat::ZERO);

    // Yellow steps from `a`, never ending inside a green piece.
    let mut breakpoints = vec![a];
    let mut colors = Vec::new();
    let mut cursor = a;
    while cursor < r {
        let cap = (cursor + t).min(r);
        let mut d = max_yellow_end(profile, cursor, cap)?;
        if let Some(piece) = rgb
            .pieces
            .iter()
            .find(|p| p.color == RgbColor::Green && p.interval.contains_in_interior(d))
        {
            d = piece.interval.lo();
        }
        if d <= cursor {
            return Err(Error::structure(format!(
                "yellow walk stuck at {cursor} on {profile:?}"
            )));
        }
        let piece = Interval::new(cursor, d).unwrap();
        colors.push(classify(profile, &piece, t)?);
        breakpoints.push(d);
        cursor = d;
    }

    // Cover the prefix [0, a] with an ordinary admissible partition.
    let partition = if a > Rat::ZERO {
        let prefix = admissible_partition(profile, Rat::ZERO, a, t, m)?;
        let mut bp = prefix.breakpoints;
        bp.extend_from_slice(&breakpoints[1..]);
        let mut cols = prefix.colors;
        cols.extend_from_slice(&colors);
        Partition {
            rule: PartitionRule::A { m, r, t },
            breakpoints: bp,
            colors: cols,
        }
    } else {
        Partition {
            rule: PartitionRule::A { m, r, t },
            breakpoints,
            colors,
        }
    };
    if partition.len() > m + 1 {
        return Err(Error::Admissibility {
            achieved: partition.len() - 1,
            max: m,
        });
    }
    let bad = partition.non_yellow_length();
    Ok((partition, bad))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(incs: &[u32]) -> ComplexityProfile {
        ComplexityProfile::from_increments(incs.to_vec()).unwrap()
    }

    fn bps(partition: &Partition) -> Vec<Rat> {
        partition.breakpoints.clone()
    }

    #[test]
    fn admissible_peak_profile() {
        let profile = p(&[2, 2, 0, 0]);
        let partition =
            admissible_partition(&profile, Rat::ZERO, Rat::int(4), Rat::int(2), 6).unwrap();
        assert_eq!(bps(&partition), vec![Rat::ZERO, Rat::int(2), Rat::int(4)]);
        assert!(partition.colors[0].yellow && !partition.colors[0].teal);
        assert!(partition.colors[1].teal && !partition.colors[1].yellow);
        partition.verify(&profile).unwrap();
    }

    #[test]
    fn admissible_identity_and_zero() {
        for profile in [ComplexityProfile::identity(4), ComplexityProfile::zero(4)] {
            let partition =
                admissible_partition(&profile, Rat::ZERO, Rat::int(4), Rat::int(2), 6).unwrap();
            assert_eq!(bps(&partition), vec![Rat::ZERO, Rat::int(2), Rat::int(4)]);
            for c in &partition.colors {
                assert!(c.teal || c.yellow);
            }
        }
    }

    #[test]
    fn admissible_rejects_tiny_budget() {
        let profile = ComplexityProfile::identity(8);
        let err = admissible_partition(&profile, Rat::ZERO, Rat::int(8), Rat::ONE, 2).unwrap_err();
        match err {
            Error::Admissibility { achieved, max } => {
                assert_eq!(achieved, 7);
                assert_eq!(max, 2);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rgb_peak_profile() {
        let profile = p(&[2, 2, 0, 0]);
        let rgb = rgb_partition(&profile, 4, Rat::int(2)).unwrap();
        let want = [
            (Rat::ZERO, Rat::ONE, RgbColor::Red),
            (Rat::ONE, Rat::int(3), RgbColor::Green),
            (Rat::int(3), Rat::int(4), RgbColor::Blue),
        ];
        assert_eq!(rgb.pieces.len(), want.len());
        for (piece, (lo, hi, color)) in rgb.pieces.iter().zip(want) {
            assert_eq!(piece.interval.lo(), lo);
            assert_eq!(piece.interval.hi(), hi);
            assert_eq!(piece.color, color);
        }
    }

    #[test]
    fn rgb_identity_is_all_green() {
        let profile = ComplexityProfile::identity(4);
        let rgb = rgb_partition(&profile, 4, Rat::int(2)).unwrap();
        assert!(rgb.pieces.iter().all(|p| p.color == RgbColor::Green));
        assert_eq!(rgb.pieces.len(), 2);
        assert_eq!(rgb.pieces[0].interval.hi(), Rat::int(2));
    }

    #[test]
    fn rgb_zero_is_all_blue() {
        let profile = ComplexityProfile::zero(4);
        let rgb = rgb_partition(&profile, 4, Rat::int(2)).unwrap();
        assert_eq!(rgb.pieces.len(), 1);
        assert_eq!(rgb.pieces[0].color, RgbColor::Blue);
        assert_eq!(rgb.pieces[0].interval.length(), Rat::int(4));
    }

    #[test]
    fn rgb_sequence_found_on_peak() {
        let profile = p(&[2, 2, 0, 0]);
        let t = Rat::int(2);
        let rgb = rgb_partition(&profile, 4, t).unwrap();
        let run = find_rgb_sequence(&rgb, t).unwrap().expect("run expected");
        assert_eq!(run.run.len(), 1);
        assert_eq!(run.total_length, Rat::int(2));
        assert_eq!(run.flanked_by.0.lo(), Rat::ZERO);
        assert_eq!(run.flanked_by.1.hi(), Rat::int(4));
    }

    #[test]
    fn rgb_sequence_absent_without_red_or_blue() {
        let t = Rat::int(2);
        let identity = ComplexityProfile::identity(4);
        let rgb = rgb_partition(&identity, 4, t).unwrap();
        assert!(find_rgb_sequence(&rgb, t).unwrap().is_none());
        let zero = ComplexityProfile::zero(4);
        let rgb = rgb_partition(&zero, 4, t).unwrap();
        assert!(find_rgb_sequence(&rgb, t).unwrap().is_none());
    }

    #[test]
    fn no_rgb_identity_all_yellow() {
        let profile = ComplexityProfile::identity(8);
        let (partition, bad) =
            no_rgb_admissible_partition(&profile, 8, Rat::int(2), 12).unwrap();
        assert_eq!(bad, Rat::ZERO);
        assert!(partition.colors.iter().all(|c| c.yellow));
        partition.verify(&profile).unwrap();
    }

    #[test]
    fn no_rgb_rising_profile_all_yellow() {
        let profile = p(&[1, 1, 2, 2, 1, 1, 1, 1]);
        let (partition, bad) =
            no_rgb_admissible_partition(&profile, 8, Rat::int(2), 12).unwrap();
        assert_eq!(bad, Rat::ZERO);
        assert!(partition.colors.iter().all(|c| c.yellow));
    }

    #[test]
    fn no_rgb_blue_prefix_reports_bad_mass() {
        // Constant prefix, then strictly super-unit growth.
        let profile = p(&[0, 0, 2, 2, 2, 2, 2, 2]);
        let (partition, bad) =
            no_rgb_admissible_partition(&profile, 8, Rat::int(2), 12).unwrap();
        assert_eq!(bad, Rat::int(2));
        // Non-yellow mass only before the first red piece.
        let s0 = profile.diagonal_onset().unwrap();
        assert!(bad <= Rat::int(s0 as i64));
        partition.verify(&profile).unwrap();
    }

    #[test]
    fn no_rgb_rejects_rgb_profiles() {
        let profile = p(&[2, 2, 0, 0]);
        let err = no_rgb_admissible_partition(&profile, 4, Rat::int(2), 12).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
    }

    #[test]
    fn good_partition_examples() {
        let profile = p(&[2, 2, 0, 0]);
        let partition = good_partition(&profile, 4).unwrap();
        assert_eq!(bps(&partition), vec![Rat::ONE, Rat::int(2), Rat::int(4)]);

        let identity = ComplexityProfile::identity(8);
        let partition = good_partition(&identity, 8).unwrap();
        assert_eq!(
            bps(&partition),
            vec![Rat::ONE, Rat::int(2), Rat::int(4), Rat::int(8)]
        );
        assert!(partition.colors.iter().all(|c| c.yellow && c.teal));

        let zero = ComplexityProfile::zero(4);
        let partition = good_partition(&zero, 4).unwrap();
        assert_eq!(bps(&partition), vec![Rat::ONE, Rat::int(2), Rat::int(4)]);
        assert!(partition.colors.iter().all(|c| c.teal));
    }

    #[test]
    fn partition_serializes_with_rule_tag() {
        let profile = p(&[2, 2, 0, 0]);
        let partition =
            admissible_partition(&profile, Rat::ZERO, Rat::int(4), Rat::int(2), 6).unwrap();
        let json = serde_json::to_string(&partition).unwrap();
        assert!(json.contains(r#""rule":"A""#));
        let back: Partition = serde_json::from_str(&json).unwrap();
        assert_eq!(back, partition);
    }
}
