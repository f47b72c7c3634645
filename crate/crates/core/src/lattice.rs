//! The recombining trinomial lattice: levels, steps, position sequences and
//! the step algebra connecting them.
//!
//! A depth-`D` lattice has vertices `(k, d)` with `|k| <= d <= D`; every
//! vertex at depth `d - 1` branches to levels `k - 1`, `k`, `k + 1` at depth
//! `d`. A path is a root-anchored vertex sequence and is represented
//! everywhere by its depth-indexed level sequence, [`PositionSeq`]. Walks
//! (step sequences in `{-1, 0, +1}`) and paths are in bijection, so a depth-`D`
//! lattice carries exactly `3^D` paths.

use std::fmt;
use thiserror::Error;

/// Horizontal (level) coordinate of a lattice vertex.
pub type Level = i32;
/// Vertical (depth) coordinate; the root sits at depth 0.
pub type Depth = usize;

/// Enumeration-facing depth cap. Counting works far beyond this; generating
/// `3^D` paths does not.
pub const MAX_DEPTH: Depth = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("invalid path: {0}")]
    InvalidPath(&'static str),
    #[error("terminal level {kstar} is unreachable at depth {depth}")]
    OutOfRange { depth: Depth, kstar: Level },
}

/// A lattice vertex `(level, depth)`; exists iff `|level| <= depth`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub level: Level,
    pub depth: Depth,
}

impl Vertex {
    pub fn new(level: Level, depth: Depth) -> Option<Self> {
        (level.unsigned_abs() as usize <= depth).then_some(Self { level, depth })
    }
}

/// One step of a walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    Down,
    Stay,
    Up,
}

impl Step {
    /// Child order used by the exhaustive generators.
    pub const ALL: [Step; 3] = [Step::Down, Step::Stay, Step::Up];

    pub fn delta(self) -> Level {
        match self {
            Step::Down => -1,
            Step::Stay => 0,
            Step::Up => 1,
        }
    }

    pub fn from_delta(delta: Level) -> Option<Self> {
        match delta {
            -1 => Some(Step::Down),
            0 => Some(Step::Stay),
            1 => Some(Step::Up),
            _ => None,
        }
    }
}

/// Root-anchored level sequence of a path: `positions[d]` is the level at
/// depth `d`. Always starts at 0 and moves by at most one level per depth.
///
/// The derived `Ord` compares level sequences entry by entry from the root —
/// exactly the lexicographic path order the generators walk.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PositionSeq(Vec<Level>);

impl PositionSeq {
    pub fn new(positions: Vec<Level>) -> Result<Self, LatticeError> {
        if positions.is_empty() {
            return Err(LatticeError::InvalidPath("empty sequence"));
        }
        if positions[0] != 0 {
            return Err(LatticeError::InvalidPath("must start at level 0"));
        }
        if positions.windows(2).any(|w| (w[1] - w[0]).abs() > 1) {
            return Err(LatticeError::InvalidPath("step larger than one level"));
        }
        Ok(Self(positions))
    }

    /// Construction for generators whose outputs are valid by construction.
    pub(crate) fn from_vec_unchecked(positions: Vec<Level>) -> Self {
        debug_assert!(validate_path(&positions));
        Self(positions)
    }

    pub fn depth(&self) -> Depth {
        self.0.len() - 1
    }

    pub fn terminal(&self) -> Level {
        *self.0.last().expect("non-empty by invariant")
    }

    pub fn positions(&self) -> &[Level] {
        &self.0
    }

    pub fn into_positions(self) -> Vec<Level> {
        self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Level> + '_ {
        self.0.iter().copied()
    }
}

impl std::ops::Index<Depth> for PositionSeq {
    type Output = Level;

    fn index(&self, d: Depth) -> &Level {
        &self.0[d]
    }
}

impl fmt::Display for PositionSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// Up/down/stay totals of a walk.
///
/// For a depth-`D` path ending at `k*`: `ups + downs + stays = D`,
/// `ups - downs = k*`, and `stays` has the parity of `D + k*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepCounts {
    pub ups: u32,
    pub downs: u32,
    pub stays: u32,
}

/// Prefix-sums a walk into its path; total on any step sequence.
pub fn walk_to_path(steps: &[Step]) -> PositionSeq {
    let mut positions = Vec::with_capacity(steps.len() + 1);
    let mut level = 0;
    positions.push(level);
    for s in steps {
        level += s.delta();
        positions.push(level);
    }
    PositionSeq::from_vec_unchecked(positions)
}

/// Recovers the walk from a raw level sequence.
pub fn path_to_walk(positions: &[Level]) -> Result<Vec<Step>, LatticeError> {
    if positions.first() != Some(&0) {
        return Err(LatticeError::InvalidPath("must start at level 0"));
    }
    positions
        .windows(2)
        .map(|w| {
            Step::from_delta(w[1] - w[0])
                .ok_or(LatticeError::InvalidPath("step larger than one level"))
        })
        .collect()
}

/// True iff the raw sequence satisfies the path invariants.
pub fn validate_path(positions: &[Level]) -> bool {
    !positions.is_empty()
        && positions[0] == 0
        && positions.windows(2).all(|w| (w[1] - w[0]).abs() <= 1)
}

/// Lowest and highest levels a depth-`D` path ending at `kstar` can visit.
///
/// The split depends on the parity of `D - kstar`: with an even gap the path
/// can spend its spare steps symmetrically, with an odd gap one step is
/// absorbed by a stay and the reach shrinks by one on each side.
pub fn position_bounds(depth: Depth, kstar: Level) -> Result<(Level, Level), LatticeError> {
    if kstar.unsigned_abs() as usize > depth {
        return Err(LatticeError::OutOfRange { depth, kstar });
    }
    let d = depth as Level;
    let (k_minus, k_plus) = if (d - kstar) % 2 == 0 {
        ((kstar - d) / 2, (d + kstar) / 2)
    } else {
        ((kstar - d + 1) / 2, (d + kstar - 1) / 2)
    };
    Ok((k_minus, k_plus))
}

pub fn step_counts(seq: &PositionSeq) -> StepCounts {
    let mut counts = StepCounts {
        ups: 0,
        downs: 0,
        stays: 0,
    };
    for w in seq.positions().windows(2) {
        match w[1] - w[0] {
            1 => counts.ups += 1,
            -1 => counts.downs += 1,
            _ => counts.stays += 1,
        }
    }
    counts
}

/// Mirrors a path across level 0. An involution; preserves validity and the
/// magnitude of the terminal level.
pub fn reflect(seq: &PositionSeq) -> PositionSeq {
    PositionSeq::from_vec_unchecked(seq.iter().map(|k| -k).collect())
}
