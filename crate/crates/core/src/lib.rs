//! Enumeration, exact counting and weighted aggregation over recombining
//! trinomial lattices.
//!
//! A depth-`D` lattice carries `3^D` root-anchored paths. This crate provides
//! four progressively cheaper ways to work with them:
//!
//! * [`oracle`] — exhaustive depth-first enumeration and histogram grouping;
//!   slow, simple, and the ground truth everything else is checked against.
//! * [`lexgen`] — recursion-free generation of all paths at a terminal:
//!   nonnegative representatives walked in lexicographic order, expanded by
//!   excursion sign flips.
//! * [`massshift`] — enumeration and exact counting of *unique path classes*
//!   (visit histograms) via staged mass redistribution and weak-composition
//!   sums; exponentially fewer items than paths.
//! * [`aggregate`] — exact distributions and averages of weighted path sums
//!   without per-path work.
//!
//! [`lattice`] holds the shared geometry, [`cardinality`] the histogram
//! algebra.
//!
//! ```
//! use tripath::massshift::{count_total, enumerate_unique};
//! use tripath::oracle::oracle_classes;
//!
//! let report = count_total(7, 2)?;
//! assert_eq!(report.total, 76u32.into());
//! assert_eq!(enumerate_unique(7, 2)?.count(), 76);
//! assert_eq!(oracle_classes(7, 2)?.len(), 76);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod aggregate;
pub mod cardinality;
pub mod lattice;
pub mod lexgen;
pub mod massshift;
pub mod oracle;

pub use aggregate::{AggregateError, Decimal, ValueDistribution, WeightTable};
pub use cardinality::{BetaTag, CardinalityError, CardinalityTuple, TruncatedTuple};
pub use lattice::{Depth, LatticeError, Level, PositionSeq, Step, StepCounts, Vertex, MAX_DEPTH};
pub use lexgen::{Excursion, ExcursionDecomposition, LexGenError};
pub use massshift::{
    CountEngine, CountReport, Discrepancy, MassShiftError, StageState, UniqueTuple,
};
pub use oracle::{ClassTable, OracleError, DEFAULT_DEPTH_CAP};
