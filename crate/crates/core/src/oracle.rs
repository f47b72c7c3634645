//! Exhaustive ground-truth enumeration.
//!
//! A depth-first traversal over the `{-1, 0, +1}` children, plus a memoized
//! variant, plus histogram grouping into equivalence classes. Deliberately
//! simple; every faster engine in this crate is validated against it.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::cardinality::{histogram, CardinalityTuple};
use crate::lattice::{Depth, Level, PositionSeq};

/// Full enumeration of `3^D` paths past this depth takes minutes, not seconds.
pub const DEFAULT_DEPTH_CAP: Depth = 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("depth {depth} exceeds the enumeration cap {cap}")]
    DepthCap { depth: Depth, cap: Depth },
}

/// Equivalence classes of one terminal: histogram key -> number of paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassTable {
    depth: Depth,
    kstar: Level,
    entries: BTreeMap<CardinalityTuple, u64>,
}

impl ClassTable {
    pub fn depth(&self) -> Depth {
        self.depth
    }

    pub fn kstar(&self) -> Level {
        self.kstar
    }

    /// Number of distinct classes.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn multiplicity(&self, key: &CardinalityTuple) -> u64 {
        self.entries.get(key).copied().unwrap_or(0)
    }

    /// Sum of multiplicities: the number of paths ending at the terminal.
    pub fn total_paths(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn classes(&self) -> impl Iterator<Item = (&CardinalityTuple, u64)> {
        self.entries.iter().map(|(k, &m)| (k, m))
    }

    pub fn keys(&self) -> impl Iterator<Item = &CardinalityTuple> {
        self.entries.keys()
    }

    pub fn contains(&self, key: &CardinalityTuple) -> bool {
        self.entries.contains_key(key)
    }
}

/// Shared feasibility test: can a partial path at `level` still reach
/// `kstar` within `remaining` steps without leaving the lattice?
fn reachable(level: Level, kstar: Level, remaining: usize) -> bool {
    (kstar - level).unsigned_abs() as usize <= remaining
}

/// Lazy depth-first enumeration of every path ending at `(kstar, depth)`,
/// children explored in `-1, 0, +1` order.
pub struct DfsPaths {
    depth: Depth,
    kstar: Level,
    positions: Vec<Level>,
    // next_child[d] = index into Step::ALL still to try when extending from depth d.
    next_child: Vec<u8>,
    done: bool,
    memo: Option<HashMap<(Level, usize), bool>>,
}

impl DfsPaths {
    fn new(depth: Depth, kstar: Level, cap: Depth, memoized: bool) -> Result<Self, OracleError> {
        if depth > cap {
            return Err(OracleError::DepthCap { depth, cap });
        }
        let done = kstar.unsigned_abs() as usize > depth;
        Ok(Self {
            depth,
            kstar,
            positions: vec![0],
            next_child: vec![0],
            done,
            memo: memoized.then(HashMap::new),
        })
    }

    fn child_ok(&mut self, level: Level, depth_here: Depth) -> bool {
        if level.unsigned_abs() as usize > depth_here {
            return false;
        }
        let remaining = self.depth - depth_here;
        let kstar = self.kstar;
        match self.memo.as_mut() {
            Some(memo) => *memo
                .entry((level, remaining))
                .or_insert_with(|| reachable(level, kstar, remaining)),
            None => reachable(level, kstar, remaining),
        }
    }

    fn backtrack(&mut self) {
        self.positions.pop();
        self.next_child.pop();
        if self.positions.is_empty() {
            self.done = true;
        }
    }
}

impl Iterator for DfsPaths {
    type Item = PositionSeq;

    fn next(&mut self) -> Option<PositionSeq> {
        while !self.done {
            let d = self.positions.len() - 1;
            if d == self.depth {
                let out = PositionSeq::from_vec_unchecked(self.positions.clone());
                self.backtrack();
                return Some(out);
            }
            let here = self.positions[d];
            let mut advanced = false;
            while self.next_child[d] < 3 {
                let step = crate::lattice::Step::ALL[self.next_child[d] as usize];
                self.next_child[d] += 1;
                let child = here + step.delta();
                if self.child_ok(child, d + 1) {
                    self.positions.push(child);
                    self.next_child.push(0);
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                self.backtrack();
            }
        }
        None
    }
}

/// Recursive-traversal oracle with the default depth cap.
pub fn dfs_enumerate(depth: Depth, kstar: Level) -> Result<DfsPaths, OracleError> {
    dfs_enumerate_with_cap(depth, kstar, DEFAULT_DEPTH_CAP)
}

pub fn dfs_enumerate_with_cap(
    depth: Depth,
    kstar: Level,
    cap: Depth,
) -> Result<DfsPaths, OracleError> {
    DfsPaths::new(depth, kstar, cap, false)
}

/// Same traversal with child feasibility answered through a hash table keyed
/// by `(level, remaining)`. Identical output multiset.
pub fn dfs_enumerate_memo(depth: Depth, kstar: Level) -> Result<DfsPaths, OracleError> {
    dfs_enumerate_memo_with_cap(depth, kstar, DEFAULT_DEPTH_CAP)
}

pub fn dfs_enumerate_memo_with_cap(
    depth: Depth,
    kstar: Level,
    cap: Depth,
) -> Result<DfsPaths, OracleError> {
    DfsPaths::new(depth, kstar, cap, true)
}

/// Groups the exhaustive enumeration by histogram.
pub fn oracle_classes(depth: Depth, kstar: Level) -> Result<ClassTable, OracleError> {
    oracle_classes_with_cap(depth, kstar, DEFAULT_DEPTH_CAP)
}

pub fn oracle_classes_with_cap(
    depth: Depth,
    kstar: Level,
    cap: Depth,
) -> Result<ClassTable, OracleError> {
    let mut entries: BTreeMap<CardinalityTuple, u64> = BTreeMap::new();
    for path in dfs_enumerate_with_cap(depth, kstar, cap)? {
        *entries.entry(histogram(&path)).or_insert(0) += 1;
    }
    Ok(ClassTable {
        depth,
        kstar,
        entries,
    })
}
