//! Measurement harness.
//!
//! The primary metric is the number of items an engine emits — path or class
//! counts are machine-independent, and the growth bounds are about counts.
//! Wall time rides along for orientation and can be zeroed for reproducible
//! output.

use std::time::Instant;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use tripath::lattice::Level;
use tripath::{lexgen, massshift, oracle};

use crate::cost::CostModel;
use crate::records::BenchRecord;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BenchEngine {
    Dfs,
    Memo,
    Lexgen,
    Unique,
    Count,
}

impl BenchEngine {
    pub fn name(self) -> &'static str {
        match self {
            BenchEngine::Dfs => "dfs",
            BenchEngine::Memo => "memo",
            BenchEngine::Lexgen => "lexgen",
            BenchEngine::Unique => "unique",
            BenchEngine::Count => "count",
        }
    }

    fn enumerates_paths(self) -> bool {
        matches!(
            self,
            BenchEngine::Dfs | BenchEngine::Memo | BenchEngine::Lexgen
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum KstarPolicy {
    /// Only the center terminal.
    Worst,
    /// Every terminal of each depth.
    Sweep,
}

/// Summary attached to a bench run: the fitted growth model plus the
/// per-depth advantage of counting classes over walking all `3^D` paths.
#[derive(Debug, serde::Serialize)]
pub struct BenchSummary {
    pub engine: &'static str,
    pub fit: CostModel,
    /// `(depth, 3^depth / class count)` on the center terminal.
    pub speedup: Vec<(usize, f64)>,
    pub speedup_strictly_increasing: bool,
    /// Speedup normalized by its predicted shape `(3/gamma)^D / sqrt(D)`;
    /// near-constant when the measured advantage follows the model.
    pub speedup_vs_shape: Vec<(usize, f64)>,
}

fn run_one(engine: BenchEngine, depth: usize, kstar: Level) -> Result<BigUint, CliError> {
    let count = match engine {
        BenchEngine::Dfs => BigUint::from(oracle::dfs_enumerate(depth, kstar)?.count()),
        BenchEngine::Memo => BigUint::from(oracle::dfs_enumerate_memo(depth, kstar)?.count()),
        BenchEngine::Lexgen => BigUint::from(lexgen::enumerate_all(depth, kstar)?.count()),
        BenchEngine::Unique => BigUint::from(massshift::enumerate_unique(depth, kstar)?.count()),
        BenchEngine::Count => massshift::count_total(depth, kstar)?.total,
    };
    Ok(count)
}

fn memory_estimate(engine: BenchEngine, depth: usize) -> u64 {
    let d = depth as u64 + 1;
    match engine {
        // Current path plus a child cursor per depth.
        BenchEngine::Dfs => 5 * d,
        // Same plus the feasibility cache.
        BenchEngine::Memo => 5 * d + 16 * d * d,
        // Representative, rebuilt suffix, flip ranges.
        BenchEngine::Lexgen => 12 * d,
        // Frame stack plus one seed tuple per stage.
        BenchEngine::Unique => 32 * d,
        BenchEngine::Count => 64,
    }
}

pub fn run_bench(
    min_depth: usize,
    max_depth: usize,
    engine: BenchEngine,
    policy: KstarPolicy,
    with_timing: bool,
) -> Result<(Vec<BenchRecord>, BenchSummary), CliError> {
    if min_depth > max_depth {
        return Err(CliError::Usage("min depth exceeds max depth".into()));
    }
    if engine.enumerates_paths() && max_depth > oracle::DEFAULT_DEPTH_CAP {
        return Err(CliError::EngineUnavailable {
            engine: engine.name(),
            depth: max_depth,
            cap: oracle::DEFAULT_DEPTH_CAP,
        });
    }
    let mut records = Vec::new();
    let mut samples = Vec::new();
    for depth in min_depth..=max_depth {
        let terminals: Vec<Level> = match policy {
            KstarPolicy::Worst => vec![0],
            KstarPolicy::Sweep => (-(depth as Level)..=depth as Level).collect(),
        };
        for kstar in terminals {
            let start = Instant::now();
            let ops = run_one(engine, depth, kstar)?;
            let wall_time_ms = if with_timing {
                start.elapsed().as_secs_f64() * 1e3
            } else {
                0.0
            };
            if kstar == 0 {
                samples.push((depth, ops.to_f64().unwrap_or(f64::MAX)));
            }
            records.push(BenchRecord {
                depth,
                kstar,
                engine: engine.name(),
                op_count: ops.to_string(),
                wall_time_ms,
                peak_memory_estimate: memory_estimate(engine, depth),
            });
        }
    }
    let fit = CostModel::fit(samples);
    let mut speedup = Vec::new();
    for depth in min_depth..=max_depth {
        let classes = massshift::count_total(depth, 0)?.total;
        let paths = BigUint::from(3u32).pow(depth as u32);
        let ratio = paths.to_f64().unwrap_or(f64::MAX) / classes.to_f64().unwrap_or(1.0);
        speedup.push((depth, ratio));
    }
    let speedup_strictly_increasing = speedup.windows(2).all(|w| w[1].1 > w[0].1);
    let base = 3.0 / crate::cost::gamma();
    let speedup_vs_shape = speedup
        .iter()
        .map(|&(d, s)| (d, s * (d.max(1) as f64).sqrt() / base.powi(d as i32)))
        .collect();
    Ok((
        records,
        BenchSummary {
            engine: engine.name(),
            fit,
            speedup,
            speedup_strictly_increasing,
            speedup_vs_shape,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dfs_ops_sum_to_three_to_the_d() {
        let (records, _) = run_bench(3, 3, BenchEngine::Dfs, KstarPolicy::Sweep, false).unwrap();
        let total: u64 = records
            .iter()
            .map(|r| r.op_count.parse::<u64>().unwrap())
            .sum();
        assert_eq!(total, 27);
    }

    #[test]
    fn count_engine_reaches_deep() {
        let (records, summary) =
            run_bench(4, 20, BenchEngine::Count, KstarPolicy::Worst, false).unwrap();
        assert_eq!(records.len(), 17);
        assert!(summary.fit.fitted_c > 0.0);
        assert!(summary.speedup_strictly_increasing);
    }

    #[test]
    fn path_engines_respect_the_cap() {
        assert!(matches!(
            run_bench(4, 40, BenchEngine::Dfs, KstarPolicy::Worst, false),
            Err(CliError::EngineUnavailable { .. })
        ));
    }
}
