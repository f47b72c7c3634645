//! Shared helpers for the engine benchmarks.

use tripath::lattice::Level;

/// Terminals exercised per depth: center, mid-shoulder, rim.
pub fn sample_terminals(depth: usize) -> Vec<Level> {
    let d = depth as Level;
    let mut out = vec![0, d / 2, d];
    out.dedup();
    out
}
