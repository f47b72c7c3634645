//! Recursion-free enumeration of all paths ending at a fixed terminal.
//!
//! Nonnegative representatives are walked in descending lexicographic order
//! from the maximal seed, each by a constant number of local edits; every
//! representative is then expanded into its excursion flip family, which
//! restores the paths with negative segments. Negative terminals reduce to
//! positive ones by reflection.

use thiserror::Error;

use crate::lattice::{reflect, validate_path, Depth, Level, PositionSeq};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LexGenError {
    #[error("terminal level {kstar} is unreachable at depth {depth}")]
    OutOfRange { depth: Depth, kstar: Level },
    #[error("invalid path: {0}")]
    InvalidPath(&'static str),
    #[error("path has negative entries")]
    NegativeInput,
}

/// A maximal positive run of a nonnegative path, bounded by zeros.
///
/// `positions[start] == 0`, entries strictly positive on `(start, end)`, and
/// `positions[end] == 0` unless the run reaches the final depth, in which
/// case `end` is the sentinel `depth + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Excursion {
    pub start: usize,
    pub end: usize,
}

/// Left-to-right excursions of a nonnegative path plus the lock flag.
///
/// The last excursion is locked when it runs into the final depth with a
/// nonzero value; flipping it would move the terminal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcursionDecomposition {
    pub excursions: Vec<Excursion>,
    pub locked: bool,
}

impl ExcursionDecomposition {
    /// Number of excursions whose sign may be toggled.
    pub fn flippable(&self) -> usize {
        self.excursions.len() - self.locked as usize
    }
}

/// The highest nonnegative path ending at `kstar`: ascend to the peak
/// `(depth + kstar) / 2`, stay once if the parity calls for it, descend.
pub fn max_seed_path(depth: Depth, kstar: Level) -> Result<PositionSeq, LexGenError> {
    if kstar < 0 || kstar as usize > depth {
        return Err(LexGenError::OutOfRange { depth, kstar });
    }
    let d = depth as Level;
    let peak = (d + kstar) / 2;
    let mut positions = Vec::with_capacity(depth + 1);
    positions.extend(0..=peak);
    if (d - kstar) % 2 != 0 {
        positions.push(peak);
    }
    positions.extend((kstar..peak).rev());
    debug_assert_eq!(positions.len(), depth + 1);
    Ok(PositionSeq::from_vec_unchecked(positions))
}

/// Immediate predecessor of `current` in the descending lexicographic walk
/// over nonnegative paths with the same terminal, or `None` at the minimum.
///
/// Tick-down: pick the largest index whose level can drop by one and still
/// reach the terminal. Sweep-across: rebuild the suffix as the greatest
/// feasible completion (climb early, then ride the descent boundary).
/// Constant auxiliary state, one pass over the suffix.
pub fn next_path(current: &PositionSeq) -> Result<Option<PositionSeq>, LexGenError> {
    if current.iter().any(|k| k < 0) {
        return Err(LexGenError::NegativeInput);
    }
    let depth = current.depth();
    let kstar = current.terminal();
    let positions = current.positions();
    for j in (1..depth).rev() {
        let v = positions[j] - 1;
        if v < 0 || (v - positions[j - 1]).abs() > 1 {
            continue;
        }
        if (kstar - v).unsigned_abs() as usize > depth - j {
            continue;
        }
        let mut out = Vec::with_capacity(depth + 1);
        out.extend_from_slice(&positions[..j]);
        out.push(v);
        for d in j + 1..=depth {
            let ceiling = kstar + (depth - d) as Level;
            out.push((out[d - 1] + 1).min(ceiling));
        }
        return Ok(Some(PositionSeq::from_vec_unchecked(out)));
    }
    Ok(None)
}

/// Splits a nonnegative path into its excursions.
pub fn decompose_excursions(seq: &PositionSeq) -> Result<ExcursionDecomposition, LexGenError> {
    if seq.iter().any(|k| k < 0) {
        return Err(LexGenError::NegativeInput);
    }
    let depth = seq.depth();
    let positions = seq.positions();
    let mut excursions = Vec::new();
    let mut locked = false;
    let mut d = 0;
    while d < depth {
        if positions[d] == 0 && positions[d + 1] > 0 {
            let start = d;
            let mut r = d + 1;
            while r <= depth && positions[r] > 0 {
                r += 1;
            }
            if r > depth {
                locked = true;
            }
            excursions.push(Excursion { start, end: r });
            d = r;
        } else {
            d += 1;
        }
    }
    Ok(ExcursionDecomposition { excursions, locked })
}

/// All sign toggles of the unlocked excursions of `seq`: exactly
/// `2^flippable` valid paths sharing the terminal, the unflipped path first,
/// subsets in lexicographic order of their index sequences.
pub struct FlipFamily {
    base: Vec<Level>,
    ranges: Vec<Excursion>,
    // Current subset as indices into `ranges`; `None` before the first item.
    subset: Option<Vec<usize>>,
    exhausted: bool,
}

impl FlipFamily {
    fn emit(&self) -> PositionSeq {
        let mut out = self.base.clone();
        if let Some(subset) = &self.subset {
            for &i in subset {
                let exc = self.ranges[i];
                let hi = exc.end.min(out.len());
                for k in &mut out[exc.start..hi] {
                    *k = -*k;
                }
            }
        }
        PositionSeq::from_vec_unchecked(out)
    }

    fn advance(&mut self) {
        let n = self.ranges.len();
        let subset = self.subset.as_mut().expect("advance after start");
        match subset.last().copied() {
            None if n > 0 => subset.push(0),
            None => self.exhausted = true,
            Some(last) if last + 1 < n => subset.push(last + 1),
            Some(_) => {
                subset.pop();
                match subset.last_mut() {
                    Some(l) => *l += 1,
                    None => self.exhausted = true,
                }
            }
        }
    }
}

impl Iterator for FlipFamily {
    type Item = PositionSeq;

    fn next(&mut self) -> Option<PositionSeq> {
        if self.exhausted {
            return None;
        }
        if self.subset.is_none() {
            self.subset = Some(Vec::new());
        } else {
            self.advance();
            if self.exhausted {
                return None;
            }
        }
        Some(self.emit())
    }
}

pub fn flip_family(seq: &PositionSeq) -> Result<FlipFamily, LexGenError> {
    let decomposition = decompose_excursions(seq)?;
    let flippable = decomposition.flippable();
    Ok(FlipFamily {
        base: seq.positions().to_vec(),
        ranges: decomposition.excursions[..flippable].to_vec(),
        subset: None,
        exhausted: false,
    })
}

/// Every path ending at `(kstar, depth)`, exactly once: the representative
/// walk expanded by flip families, reflected wholesale when `kstar < 0`.
pub struct AllPaths {
    mirror: bool,
    current: Option<FlipFamily>,
    representative: Option<PositionSeq>,
}

impl Iterator for AllPaths {
    type Item = PositionSeq;

    fn next(&mut self) -> Option<PositionSeq> {
        loop {
            if let Some(family) = &mut self.current {
                if let Some(path) = family.next() {
                    debug_assert!(validate_path(path.positions()));
                    return Some(if self.mirror { reflect(&path) } else { path });
                }
            }
            let rep = self.representative.take()?;
            self.representative = next_path(&rep).expect("representatives stay nonnegative");
            self.current = Some(flip_family(&rep).expect("representatives stay nonnegative"));
        }
    }
}

pub fn enumerate_all(depth: Depth, kstar: Level) -> Result<AllPaths, LexGenError> {
    if kstar.unsigned_abs() as usize > depth {
        return Err(LexGenError::OutOfRange { depth, kstar });
    }
    let seed = max_seed_path(depth, kstar.abs())?;
    Ok(AllPaths {
        mirror: kstar < 0,
        current: None,
        representative: Some(seed),
    })
}
