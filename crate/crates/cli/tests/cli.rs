//! End-to-end checks of the binary: flag surface, output schemas, exit codes,
//! and byte-level determinism.

use std::process::{Command, Output};

fn tripath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tripath"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = tripath(args);
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn enumerate_unique_emits_jsonl_records() {
    let text = stdout(&["enumerate", "--depth", "7", "--terminal", "2"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 76);
    let first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(
        first,
        serde_json::json!({
            "k_minus": -2,
            "counts": [0, 0, 1, 1, 2, 2, 2],
            "stage": 0,
            "m": 0
        })
    );
    for line in &lines {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let counts: u64 = v["counts"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c.as_u64().unwrap())
            .sum();
        assert_eq!(counts, 8, "visit mass must be depth + 1");
    }
}

#[test]
fn enumerate_path_engines_agree_on_counts() {
    let dfs = stdout(&[
        "enumerate",
        "--depth",
        "6",
        "--terminal",
        "1",
        "--engine",
        "dfs",
    ]);
    let memo = stdout(&[
        "enumerate",
        "--depth",
        "6",
        "--terminal",
        "1",
        "--engine",
        "memo",
    ]);
    let lexgen = stdout(&[
        "enumerate",
        "--depth",
        "6",
        "--terminal",
        "1",
        "--engine",
        "lexgen",
    ]);
    assert_eq!(dfs.lines().count(), lexgen.lines().count());
    assert_eq!(dfs.lines().count(), memo.lines().count());
    let first: serde_json::Value = serde_json::from_str(dfs.lines().next().unwrap()).unwrap();
    assert!(first["positions"].is_array());
}

#[test]
fn negative_terminals_parse_and_mirror() {
    let neg = stdout(&["count", "--depth", "7", "--terminal", "-2"]);
    let v: serde_json::Value = serde_json::from_str(&neg).unwrap();
    assert_eq!(v["kstar"], -2);
    assert_eq!(v["total"], "76"); // mirror of terminal +2

    let text = stdout(&["enumerate", "--depth", "5", "--terminal", "-3"]);
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    // Mirrored seed key: negated band of the +3 seed, padded over [-4, 1].
    assert_eq!(first["k_minus"], -4);
    assert_eq!(first["counts"], serde_json::json!([1, 2, 1, 1, 1, 0]));

    let agg = stdout(&[
        "aggregate", "--depth", "4", "--terminal", "-1", "--weight-base", "0", "--weight-step",
        "1",
    ]);
    let v: serde_json::Value = serde_json::from_str(&agg).unwrap();
    assert!(v["average"].as_f64().unwrap() < 0.0);
}

#[test]
fn count_record_schema_and_values() {
    let text = stdout(&["count", "--depth", "7", "--terminal", "2"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["D"], 7);
    assert_eq!(v["kstar"], 2);
    assert_eq!(v["total"], "76");
    assert_eq!(v["engine"], "table");
    assert_eq!(
        v["per_stage"],
        serde_json::json!([[0, "46"], [1, "25"], [2, "5"]])
    );
    assert!(!v["discrepancies"].as_array().unwrap().is_empty());

    let trivial = stdout(&["count", "--depth", "4", "--terminal", "4"]);
    let v: serde_json::Value = serde_json::from_str(&trivial).unwrap();
    assert_eq!(v["total"], "1");
}

#[test]
fn count_supports_oracle_check_and_closed_engine() {
    let text = stdout(&["count", "--depth", "6", "--terminal", "0", "--check-oracle"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["oracle_checked"], true);
    assert_eq!(v["total"], "33");

    let closed = stdout(&[
        "count",
        "--depth",
        "7",
        "--terminal",
        "2",
        "--count-engine",
        "closed",
    ]);
    let v: serde_json::Value = serde_json::from_str(&closed).unwrap();
    assert_eq!(v["engine"], "closed");
    assert_ne!(v["total"], "76"); // the closed formula over-counts here
}

#[test]
fn aggregate_reports_known_distribution() {
    let text = stdout(&[
        "aggregate",
        "--depth",
        "4",
        "--terminal",
        "0",
        "--weight-base",
        "20",
        "--weight-step",
        "2",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["distribution"]["102"], "3");
    assert_eq!(v["total_paths"], "19");
    assert_eq!(v["average"], 100.0);
}

#[test]
fn aggregate_reads_weight_files() {
    let dir = std::env::temp_dir().join(format!("tripath-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let weights = dir.join("weights.csv");
    std::fs::write(&weights, "level,weight\n-2,16\n-1,18\n0,20\n1,22\n2,24\n").unwrap();
    let text = stdout(&[
        "aggregate",
        "--depth",
        "4",
        "--terminal",
        "0",
        "--weights",
        weights.to_str().unwrap(),
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["distribution"]["102"], "3");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn count_and_aggregate_csv_formats() {
    let count = stdout(&[
        "count",
        "--depth",
        "7",
        "--terminal",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(count, "stage,count\n0,46\n1,25\n2,5\ntotal,76\n");
    let agg = stdout(&[
        "aggregate",
        "--depth",
        "2",
        "--terminal",
        "0",
        "--weight-base",
        "0",
        "--weight-step",
        "1",
        "--format",
        "csv",
    ]);
    assert_eq!(agg, "value,count\n-1,1\n0,1\n1,1\n");
}

#[test]
fn bench_csv_has_the_documented_columns() {
    let text = stdout(&[
        "bench",
        "--min-depth",
        "4",
        "--max-depth",
        "6",
        "--engine",
        "dfs",
        "--kstar-policy",
        "sweep",
        "--no-timing",
    ]);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "D,kstar,engine,op_count,wall_time_ms,peak_memory_estimate"
    );
    let total: u64 = lines
        .clone()
        .filter(|l| l.starts_with("6,"))
        .map(|l| l.split(',').nth(3).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 729);
}

#[test]
fn enumerate_json_format_wraps_an_array() {
    let text = stdout(&[
        "enumerate",
        "--depth",
        "3",
        "--terminal",
        "1",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let records = v.as_array().unwrap();
    assert_eq!(records.len(), 5);
    assert_eq!(records[0]["stage"], 0);
    assert_eq!(records[4]["stage"], 1);
}

#[test]
fn bench_json_combines_records_and_summary() {
    let text = stdout(&[
        "bench",
        "--min-depth",
        "4",
        "--max-depth",
        "10",
        "--engine",
        "count",
        "--no-timing",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 7);
    assert!(v["summary"]["fit"]["fitted_c"].as_f64().unwrap() > 0.0);
    assert_eq!(v["summary"]["speedup_strictly_increasing"], true);
    let gamma = v["summary"]["fit"]["gamma"].as_f64().unwrap();
    assert!((gamma - 1.61185).abs() < 1e-4);
}

#[test]
fn enumerate_csv_format() {
    let text = stdout(&[
        "enumerate",
        "--depth",
        "4",
        "--terminal",
        "4",
        "--format",
        "csv",
    ]);
    assert_eq!(text, "k_minus,counts,stage,m\n0,\"1,1,1,1,1\",0,0\n");
    let paths = stdout(&[
        "enumerate",
        "--depth",
        "2",
        "--terminal",
        "0",
        "--engine",
        "dfs",
        "--format",
        "csv",
    ]);
    assert_eq!(paths, "positions\n\"0,-1,0\"\n\"0,0,0\"\n\"0,1,0\"\n");
}

#[test]
fn selfcheck_passes_and_reports_matrix() {
    let out = tripath(&["selfcheck", "--max-depth", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS  paths: lexgen vs dfs vs memo"));
    assert!(text.contains("PASS  classes: unique vs oracle, counts, order"));
    assert!(text.contains("PASS  counts: table vs closed-form ledger"));
    assert!(text.contains("PASS  aggregation: dp vs classes vs per-path"));
    assert!(text.contains("DISCREPANCY"));
    assert!(text.trim_end().ends_with("ALL CHECKS PASSED"));
}

#[test]
fn selfcheck_json_report() {
    let text = stdout(&["selfcheck", "--max-depth", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 4);
    assert!(v["discrepancies"]
        .as_array()
        .unwrap()
        .iter()
        .all(|d| d["table"] != d["closed"]));
}

#[test]
fn usage_errors_exit_two() {
    let out = tripath(&["enumerate", "--depth", "4"]); // missing --terminal
    assert_eq!(out.status.code(), Some(2));
    let out = tripath(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_one() {
    // Unreachable terminal.
    let out = tripath(&["count", "--depth", "3", "--terminal", "5"]);
    assert_eq!(out.status.code(), Some(1));
    // Exhaustive engine past its cap.
    let out = tripath(&[
        "enumerate",
        "--depth",
        "20",
        "--terminal",
        "0",
        "--engine",
        "dfs",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["enumerate", "--depth", "6", "--terminal", "0"];
    assert_eq!(stdout(&args), stdout(&args));
    let bench_args = [
        "bench",
        "--min-depth",
        "4",
        "--max-depth",
        "8",
        "--engine",
        "count",
        "--no-timing",
    ];
    assert_eq!(stdout(&bench_args), stdout(&bench_args));
}

#[test]
fn seed_order_prints_the_stage_chain() {
    let out = tripath(&[
        "enumerate",
        "--depth",
        "7",
        "--terminal",
        "2",
        "--seed-order",
    ]);
    assert!(out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("stage=0 window=[0,4] seed=0:1,1,2,2,2 horizon=5"));
    assert!(err.contains("stage=1 window=[-1,3] seed=-1:1,2,1,2,2 horizon=3"));
    assert!(err.contains("stage=2 window=[-2,2] seed=-2:1,2,2,1,2 horizon=1"));
}

#[test]
fn out_flag_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("tripath-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let target = dir.join("counts.json");
    let out = tripath(&[
        "count",
        "--depth",
        "5",
        "--terminal",
        "1",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["total"], "20");
    std::fs::remove_dir_all(&dir).unwrap();
}
