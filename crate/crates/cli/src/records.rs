//! Machine-readable output shapes. Field names and value encodings are part
//! of the tool's interface: counts always travel as decimal strings so no
//! consumer silently truncates a big integer.

use serde::Serialize;

use tripath::massshift::{CountReport, Discrepancy};
use tripath::{Level, PositionSeq, UniqueTuple};

#[derive(Debug, Serialize)]
pub struct PathRecord {
    pub positions: Vec<Level>,
}

impl PathRecord {
    pub fn from_path(path: &PositionSeq) -> Self {
        Self {
            positions: path.positions().to_vec(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TupleRecord {
    pub k_minus: Level,
    pub counts: Vec<u32>,
    pub stage: u32,
    pub m: u32,
}

impl TupleRecord {
    /// Pads the key out to the full `[k_minus, k_plus]` band of the terminal.
    pub fn from_unique(item: &UniqueTuple, k_minus: Level, k_plus: Level) -> Self {
        Self {
            k_minus,
            counts: item.tuple.padded_counts(k_minus, k_plus),
            stage: item.stage,
            m: item.m,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DiscrepancyRecord {
    #[serde(rename = "D")]
    pub depth: usize,
    pub kstar: Level,
    pub stage: u32,
    pub i: u32,
    pub table: String,
    pub closed: String,
}

impl DiscrepancyRecord {
    pub fn from_discrepancy(d: &Discrepancy) -> Self {
        Self {
            depth: d.depth,
            kstar: d.kstar,
            stage: d.stage,
            i: d.mass,
            table: d.table.to_string(),
            closed: d.closed.to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CountRecord {
    #[serde(rename = "D")]
    pub depth: usize,
    pub kstar: Level,
    pub per_stage: Vec<(u32, String)>,
    pub total: String,
    pub engine: String,
    pub oracle_checked: bool,
    pub discrepancies: Vec<DiscrepancyRecord>,
}

impl CountRecord {
    pub fn from_report(report: &CountReport, discrepancies: Vec<DiscrepancyRecord>) -> Self {
        Self {
            depth: report.depth,
            kstar: report.kstar,
            per_stage: report
                .per_stage
                .iter()
                .map(|(stage, count)| (*stage, count.to_string()))
                .collect(),
            total: report.total.to_string(),
            engine: report.engine.name().to_string(),
            oracle_checked: report.oracle_checked,
            discrepancies,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AggregateRecord {
    #[serde(rename = "D")]
    pub depth: usize,
    pub kstar: Level,
    pub weights: String,
    /// Path-sum value -> path count, both as decimal strings.
    pub distribution: serde_json::Map<String, serde_json::Value>,
    pub total_paths: String,
    pub distinct_values: usize,
    pub average: f64,
}

#[derive(Debug, Serialize)]
pub struct BenchRecord {
    #[serde(rename = "D")]
    pub depth: usize,
    pub kstar: Level,
    pub engine: &'static str,
    pub op_count: String,
    pub wall_time_ms: f64,
    pub peak_memory_estimate: u64,
}

impl BenchRecord {
    pub fn csv_header() -> &'static str {
        "D,kstar,engine,op_count,wall_time_ms,peak_memory_estimate"
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.depth,
            self.kstar,
            self.engine,
            self.op_count,
            self.wall_time_ms,
            self.peak_memory_estimate
        )
    }
}
