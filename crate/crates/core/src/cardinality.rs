//! Cardinality tuples: per-level visit histograms of paths.
//!
//! Two paths ending at the same terminal are equivalent when they visit each
//! level the same number of times; the histogram is the class key. This
//! module defines the tuple type, the orders used to enumerate classes, the
//! canonical seed tuple, realizability checks, and weighted sums.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::aggregate::{AggregateError, WeightTable};
use crate::lattice::{position_bounds, Depth, Level, PositionSeq};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CardinalityError {
    #[error("terminal level {kstar} is unreachable at depth {depth}")]
    OutOfRange { depth: Depth, kstar: Level },
    #[error("tuple has visits at negative levels")]
    NonzeroNegativePart,
}

/// Visit histogram of a path: `count_at(k)` is how many depths sit at level
/// `k`. Stored in normalized form (support trimmed to the visited range), so
/// equality and hashing ignore zero padding.
///
/// The derived `Ord` is a structural order used for deterministic storage;
/// the semantic orders are [`lex_compare_positive`] and [`lex_compare_mixed`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CardinalityTuple {
    k_min: Level,
    counts: Vec<u32>,
}

impl CardinalityTuple {
    /// Builds a tuple from `counts` indexed from `k_min` upward, trimming
    /// zero ends.
    pub fn new(k_min: Level, counts: Vec<u32>) -> Self {
        let lead = counts.iter().take_while(|&&c| c == 0).count();
        if lead == counts.len() {
            return Self {
                k_min: 0,
                counts: vec![],
            };
        }
        let trail = counts.iter().rev().take_while(|&&c| c == 0).count();
        Self {
            k_min: k_min + lead as Level,
            counts: counts[lead..counts.len() - trail].to_vec(),
        }
    }

    /// Lowest visited level.
    pub fn k_min(&self) -> Level {
        self.k_min
    }

    /// Highest visited level.
    pub fn k_max(&self) -> Level {
        self.k_min + self.counts.len() as Level - 1
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn count_at(&self, level: Level) -> u32 {
        if level < self.k_min {
            return 0;
        }
        let idx = (level - self.k_min) as usize;
        self.counts.get(idx).copied().unwrap_or(0)
    }

    /// Total number of visits; `D + 1` for a depth-`D` path.
    pub fn total_mass(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    /// `(level, count)` pairs over the visited range.
    pub fn entries(&self) -> impl Iterator<Item = (Level, u32)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (self.k_min + i as Level, c))
    }

    /// Counts padded out to an explicit `[k_min, k_max]` range.
    pub fn padded_counts(&self, k_min: Level, k_max: Level) -> Vec<u32> {
        (k_min..=k_max).map(|k| self.count_at(k)).collect()
    }

    /// Index mirror `k -> -k`; the histogram of the reflected path.
    pub fn mirror(&self) -> Self {
        let mut counts = self.counts.clone();
        counts.reverse();
        Self::new(-self.k_max(), counts)
    }

    /// True when no negative level is visited.
    pub fn is_nonnegative(&self) -> bool {
        self.counts.is_empty() || self.k_min >= 0
    }
}

/// Canonical text form `k_min:c,c,...`; stable across runs, used for hashing
/// and machine output.
impl fmt::Display for CardinalityTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.k_min)?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Positive-restriction view of a tuple with zero negative part: counts
/// indexed from level 0 upward. Dropping the identically-zero negative
/// coordinates loses nothing and preserves the right-to-left order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedTuple {
    counts: Vec<u32>,
}

impl TruncatedTuple {
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }
}

/// Parity toggle of `depth + kstar`: 1 when odd, 2 when even.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BetaTag(u8);

impl BetaTag {
    pub fn for_terminal(depth: Depth, kstar: Level) -> Self {
        let parity = (depth as i64 + kstar as i64).rem_euclid(2);
        BetaTag(if parity == 1 { 1 } else { 2 })
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

/// Histogram of a path's level visits.
pub fn histogram(seq: &PositionSeq) -> CardinalityTuple {
    let lo = seq.iter().min().expect("non-empty");
    let hi = seq.iter().max().expect("non-empty");
    let mut counts = vec![0u32; (hi - lo + 1) as usize];
    for k in seq.iter() {
        counts[(k - lo) as usize] += 1;
    }
    CardinalityTuple::new(lo, counts)
}

/// Right-to-left lexicographic order on tuples with zero negative part:
/// compares counts from the highest level downward.
pub fn lex_compare_positive(
    a: &CardinalityTuple,
    b: &CardinalityTuple,
) -> Result<Ordering, CardinalityError> {
    if !a.is_nonnegative() || !b.is_nonnegative() {
        return Err(CardinalityError::NonzeroNegativePart);
    }
    let top = a.k_max().max(b.k_max());
    for level in (0..=top).rev() {
        let ord = a.count_at(level).cmp(&b.count_at(level));
        if ord != Ordering::Equal {
            return Ok(ord);
        }
    }
    Ok(Ordering::Equal)
}

/// Negative-first, right-to-left order on arbitrary tuples.
///
/// Negative levels compare first, nearest 0 outward, with *fewer* visits
/// ranking higher (a shallower dip is the larger tuple); ties fall through to
/// the positive right-to-left comparison. Total on any pair; extends
/// [`lex_compare_positive`].
pub fn lex_compare_mixed(a: &CardinalityTuple, b: &CardinalityTuple) -> Ordering {
    let deepest = a.k_min().min(b.k_min());
    let mut j = -1;
    while j >= deepest {
        let (x, y) = (a.count_at(j), b.count_at(j));
        if x != y {
            return y.cmp(&x);
        }
        j -= 1;
    }
    let top = a.k_max().max(b.k_max()).max(0);
    for level in (0..=top).rev() {
        let ord = a.count_at(level).cmp(&b.count_at(level));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

/// The histogram of the highest nonnegative path ending at `kstar`: ones up
/// to `kstar`, twos across the excursion band, and a top entry of 1 or 2
/// depending on the parity of `depth - kstar`. Paired with the [`BetaTag`]
/// of `(depth, kstar)`.
pub fn seed_tuple(
    depth: Depth,
    kstar: Level,
) -> Result<(CardinalityTuple, BetaTag), CardinalityError> {
    if kstar < 0 || kstar as usize > depth {
        return Err(CardinalityError::OutOfRange { depth, kstar });
    }
    let (_, k_plus) = position_bounds(depth, kstar).expect("checked range");
    let mut counts = Vec::with_capacity(k_plus as usize + 1);
    for k in 0..=k_plus {
        let c = if k < kstar {
            1
        } else if k < k_plus {
            2
        } else if (depth - kstar as usize).is_multiple_of(2) {
            1
        } else {
            2
        };
        counts.push(c);
    }
    debug_assert_eq!(
        counts.iter().map(|&c| c as u64).sum::<u64>(),
        depth as u64 + 1
    );
    Ok((
        CardinalityTuple::new(0, counts),
        BetaTag::for_terminal(depth, kstar),
    ))
}

/// True iff some depth-`depth` path ending at `kstar` has this histogram.
///
/// For `kstar >= 0` the conditions are: total mass `depth + 1`; contiguous
/// support containing 0 and `kstar`; at least two visits strictly between
/// `kstar` and the top and at `kstar` itself when the path climbs higher; at
/// least two visits strictly between the bottom and 0; and enough visits at 0
/// to leave and re-enter for every side excursion. Negative terminals mirror.
pub fn validate_tuple(tuple: &CardinalityTuple, depth: Depth, kstar: Level) -> bool {
    if kstar < 0 {
        return validate_tuple(&tuple.mirror(), depth, -kstar);
    }
    if tuple.is_empty() || tuple.total_mass() != depth as u64 + 1 {
        return false;
    }
    let a = tuple.k_min();
    let b = tuple.k_max();
    if a > 0 || b < kstar {
        return false;
    }
    // Contiguous support: the path moves one level at a time.
    if tuple.entries().any(|(_, c)| c == 0) {
        return false;
    }
    // Above the terminal: pass-through levels need an up and a down visit.
    for k in kstar + 1..b {
        if tuple.count_at(k) < 2 {
            return false;
        }
    }
    if kstar > 0 && b > kstar && tuple.count_at(kstar) < 2 {
        return false;
    }
    // Below zero: same, mirrored.
    for k in a + 1..0 {
        if tuple.count_at(k) < 2 {
            return false;
        }
    }
    // Level 0 must support the start plus one re-entry per side excursion.
    let c0_floor = if kstar == 0 {
        1 + (b > 0) as u32 + (a < 0) as u32
    } else {
        1 + (a < 0) as u32
    };
    tuple.count_at(0) >= c0_floor
}

/// `sum_k count(k) * w(k)`; the weighted path sum of any path in the class.
pub fn weighted_sum(
    tuple: &CardinalityTuple,
    weights: &WeightTable,
) -> Result<f64, AggregateError> {
    let mut acc = 0.0;
    for (level, count) in tuple.entries() {
        acc += count as f64 * weights.weight(level)?.to_f64();
    }
    Ok(acc)
}

/// Drops the zero negative coordinates of a nonnegative-support tuple.
pub fn truncate(tuple: &CardinalityTuple) -> Result<TruncatedTuple, CardinalityError> {
    if !tuple.is_nonnegative() {
        return Err(CardinalityError::NonzeroNegativePart);
    }
    let mut counts = vec![0u32; tuple.k_min() as usize];
    counts.extend_from_slice(&tuple.padded_counts(tuple.k_min(), tuple.k_max()));
    Ok(TruncatedTuple { counts })
}

/// Re-attaches a zero negative block down to `k_minus`.
pub fn untruncate(truncated: &TruncatedTuple, k_minus: Level) -> CardinalityTuple {
    debug_assert!(k_minus <= 0);
    let mut counts = vec![0u32; (-k_minus) as usize];
    counts.extend_from_slice(&truncated.counts);
    CardinalityTuple::new(k_minus, counts)
}
