//! Cross-engine consistency gauntlet.
//!
//! Runs every pair of independent routes to the same answer and reports a
//! pass/fail matrix: the recursion-free path generator against the exhaustive
//! traversal, the class enumerator and both counting engines against oracle
//! grouping, and the two aggregation routes against per-path summation. Also
//! surfaces every spot where the closed-form count departs from the slot
//! schedule.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::Serialize;

use tripath::cardinality::{lex_compare_mixed, validate_tuple};
use tripath::lattice::Level;
use tripath::massshift::{self, CountEngine};
use tripath::{aggregate, lexgen, oracle, Decimal, WeightTable};

use crate::records::DiscrepancyRecord;

#[derive(Debug, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct SelfCheckReport {
    pub max_depth: usize,
    pub passed: bool,
    pub checks: Vec<CheckLine>,
    pub discrepancies: Vec<DiscrepancyRecord>,
}

fn check(checks: &mut Vec<CheckLine>, name: &str, result: Result<String, String>) {
    let (passed, detail) = match result {
        Ok(detail) => (true, detail),
        Err(detail) => (false, detail),
    };
    checks.push(CheckLine {
        name: name.to_string(),
        passed,
        detail,
    });
}

fn paths_agree(max_depth: usize) -> Result<String, String> {
    let mut paths_seen = 0u64;
    for depth in 0..=max_depth {
        let mut depth_total = 0u64;
        for kstar in -(depth as Level)..=depth as Level {
            let mut fast: Vec<_> = lexgen::enumerate_all(depth, kstar)
                .map_err(|e| e.to_string())?
                .collect();
            let mut slow: Vec<_> = oracle::dfs_enumerate(depth, kstar)
                .map_err(|e| e.to_string())?
                .collect();
            fast.sort();
            slow.sort();
            if fast != slow {
                return Err(format!(
                    "multiset mismatch at depth {depth} terminal {kstar}"
                ));
            }
            let memo = oracle::dfs_enumerate_memo(depth, kstar)
                .map_err(|e| e.to_string())?
                .count();
            if memo != slow.len() {
                return Err(format!(
                    "memo count mismatch at depth {depth} terminal {kstar}"
                ));
            }
            depth_total += fast.len() as u64;
        }
        if depth_total != 3u64.pow(depth as u32) {
            return Err(format!("depth {depth} total {depth_total} != 3^{depth}"));
        }
        paths_seen += depth_total;
    }
    Ok(format!(
        "{paths_seen} paths cross-checked over depths 0..={max_depth}"
    ))
}

fn classes_agree(max_depth: usize) -> Result<String, String> {
    let mut classes_seen = 0usize;
    for depth in 0..=max_depth {
        for kstar in -(depth as Level)..=depth as Level {
            let table = oracle::oracle_classes(depth, kstar).map_err(|e| e.to_string())?;
            let mut seen = BTreeSet::new();
            let mut previous: Option<tripath::UniqueTuple> = None;
            for item in massshift::enumerate_unique(depth, kstar).map_err(|e| e.to_string())? {
                if !validate_tuple(&item.tuple, depth, kstar) {
                    return Err(format!(
                        "invalid tuple {} at depth {depth} k* {kstar}",
                        item.tuple
                    ));
                }
                if !table.contains(&item.tuple) {
                    return Err(format!(
                        "phantom key {} at depth {depth} k* {kstar}",
                        item.tuple
                    ));
                }
                if !seen.insert(item.tuple.clone()) {
                    return Err(format!(
                        "duplicate key {} at depth {depth} k* {kstar}",
                        item.tuple
                    ));
                }
                if let Some(prev) = &previous {
                    if prev.stage > item.stage {
                        return Err(format!("stage order violated at depth {depth} k* {kstar}"));
                    }
                    if prev.stage == item.stage {
                        // Mirrored terminals descend after mirroring back.
                        let (a, b) = if kstar >= 0 {
                            (prev.tuple.clone(), item.tuple.clone())
                        } else {
                            (prev.tuple.mirror(), item.tuple.mirror())
                        };
                        if lex_compare_mixed(&a, &b) != Ordering::Greater {
                            return Err(format!(
                                "in-stage order violated at depth {depth} k* {kstar}"
                            ));
                        }
                    }
                }
                previous = Some(item);
            }
            if seen.len() != table.len() {
                return Err(format!(
                    "key count {} != oracle {} at depth {depth} k* {kstar}",
                    seen.len(),
                    table.len()
                ));
            }
            let report = massshift::count_total(depth, kstar).map_err(|e| e.to_string())?;
            if report.total != BigUint::from(table.len()) {
                return Err(format!(
                    "count {} != oracle {} at depth {depth} k* {kstar}",
                    report.total,
                    table.len()
                ));
            }
            let stage_sum: BigUint = report.per_stage.iter().map(|(_, c)| c.clone()).sum();
            if stage_sum != report.total {
                return Err(format!("stage sum mismatch at depth {depth} k* {kstar}"));
            }
            classes_seen += table.len();
        }
    }
    Ok(format!(
        "{classes_seen} class keys matched over depths 0..={max_depth}"
    ))
}

fn closed_form_scan(max_depth: usize) -> (Vec<DiscrepancyRecord>, Result<String, String>) {
    let mut entries = Vec::new();
    let mut closed_matches_oracle_everywhere = true;
    for depth in 0..=max_depth {
        for kstar in -(depth as Level)..=depth as Level {
            match massshift::closed_form_discrepancies(depth, kstar) {
                Ok(list) => {
                    if !list.is_empty() {
                        closed_matches_oracle_everywhere = false;
                    }
                    entries.extend(list.iter().map(DiscrepancyRecord::from_discrepancy));
                }
                Err(e) => return (entries, Err(e.to_string())),
            }
            // Diverging totals must be explained by ledger entries. (Equal
            // totals with entries can happen: summand differences offset.)
            let table = massshift::count_total(depth, kstar).unwrap().total;
            let closed = massshift::count_total_with(depth, kstar, CountEngine::ClosedForm)
                .unwrap()
                .total;
            let has_entries = entries.iter().any(|d| d.depth == depth && d.kstar == kstar);
            if table != closed && !has_entries {
                return (
                    entries,
                    Err(format!(
                        "unexplained total mismatch at depth {depth} k* {kstar}"
                    )),
                );
            }
        }
    }
    let detail = format!(
        "{} divergent summands recorded; closed form {} the slot schedule somewhere in range",
        entries.len(),
        if closed_matches_oracle_everywhere {
            "matches"
        } else {
            "departs from"
        },
    );
    (entries, Ok(detail))
}

fn aggregates_agree(max_depth: usize) -> Result<String, String> {
    let weights = WeightTable::affine(Decimal::from_int(20), Decimal::from_int(2));
    let mut cells = 0usize;
    for depth in 0..=max_depth.min(8) {
        for kstar in -(depth as Level)..=depth as Level {
            let dp = aggregate::path_sum_distribution(depth, kstar, &weights)
                .map_err(|e| e.to_string())?;
            let classes = oracle::oracle_classes(depth, kstar).map_err(|e| e.to_string())?;
            let by_class =
                aggregate::class_aggregate(&classes, &weights).map_err(|e| e.to_string())?;
            if dp != by_class {
                return Err(format!("aggregation mismatch at depth {depth} k* {kstar}"));
            }
            let mut brute = std::collections::BTreeMap::<i64, u64>::new();
            for path in oracle::dfs_enumerate(depth, kstar).map_err(|e| e.to_string())? {
                let value: i64 = path.iter().map(|k| 20 + 2 * k as i64).sum();
                *brute.entry(value).or_insert(0) += 1;
            }
            if brute.len() != dp.len() {
                return Err(format!(
                    "value support mismatch at depth {depth} k* {kstar}"
                ));
            }
            for (value, count) in brute {
                if dp.count_for(Decimal::from_int(value)) != BigUint::from(count) {
                    return Err(format!(
                        "count mismatch for value {value} at depth {depth} k* {kstar}"
                    ));
                }
            }
            cells += dp.len();
        }
    }
    Ok(format!("{cells} value cells agreed across three routes"))
}

pub fn run_selfcheck(max_depth: usize) -> SelfCheckReport {
    let capped = max_depth.min(oracle::DEFAULT_DEPTH_CAP);
    let mut checks = Vec::new();
    check(
        &mut checks,
        "paths: lexgen vs dfs vs memo",
        paths_agree(capped),
    );
    check(
        &mut checks,
        "classes: unique vs oracle, counts, order",
        classes_agree(capped),
    );
    let (discrepancies, scan) = closed_form_scan(capped);
    check(&mut checks, "counts: table vs closed-form ledger", scan);
    check(
        &mut checks,
        "aggregation: dp vs classes vs per-path",
        aggregates_agree(capped),
    );
    let passed = checks.iter().all(|c| c.passed);
    SelfCheckReport {
        max_depth: capped,
        passed,
        checks,
        discrepancies,
    }
}
