//! Command implementations behind the `tripath` binary.

pub mod bench;
pub mod cost;
pub mod records;
pub mod selfcheck;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use tripath::lattice::{position_bounds, Depth, Level, MAX_DEPTH};
use tripath::massshift::{self, CountEngine};
use tripath::{aggregate, lexgen, oracle, Decimal, WeightTable};

use bench::{BenchEngine, KstarPolicy};
use records::{
    AggregateRecord, BenchRecord, CountRecord, DiscrepancyRecord, PathRecord, TupleRecord,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lattice(#[from] tripath::LatticeError),
    #[error(transparent)]
    Oracle(#[from] tripath::OracleError),
    #[error(transparent)]
    LexGen(#[from] tripath::LexGenError),
    #[error(transparent)]
    MassShift(#[from] tripath::MassShiftError),
    #[error(transparent)]
    Aggregate(#[from] tripath::AggregateError),
    #[error("engine {engine} cannot enumerate at depth {depth} (cap {cap})")]
    EngineUnavailable {
        engine: &'static str,
        depth: Depth,
        cap: Depth,
    },
    #[error("self-check reported failures")]
    SelfCheckFailed,
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "tripath",
    version,
    about = "Enumerate, count and aggregate paths of recombining trinomial lattices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stream paths or unique class keys for one terminal.
    Enumerate(EnumerateArgs),
    /// Exact class count with per-stage breakdown.
    Count(CountArgs),
    /// Distribution and average of weighted path sums.
    Aggregate(AggregateArgs),
    /// Measure emitted-item counts across depths and fit the growth model.
    Bench(BenchArgs),
    /// Cross-validate every engine pair and print a pass/fail matrix.
    Selfcheck(SelfcheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathEngine {
    Dfs,
    Memo,
    Lexgen,
    Unique,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Jsonl,
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    /// Lattice depth D.
    #[arg(long)]
    pub depth: Depth,
    /// Terminal level k*.
    #[arg(long, allow_negative_numbers = true)]
    pub terminal: Level,
    #[arg(long, value_enum, default_value_t = PathEngine::Unique)]
    pub engine: PathEngine,
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    pub format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the stage seed chain to stderr (unique engine).
    #[arg(long)]
    pub seed_order: bool,
    /// Suppress timing side-channels in output (none here; accepted for
    /// uniformity).
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long)]
    pub depth: Depth,
    #[arg(long, allow_negative_numbers = true)]
    pub terminal: Level,
    /// Which counting engine fills the record.
    #[arg(long, value_enum, default_value_t = CountEngineArg::Table)]
    pub count_engine: CountEngineArg,
    /// Re-derive the count from the exhaustive oracle (depth-capped).
    #[arg(long)]
    pub check_oracle: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountEngineArg {
    Table,
    Closed,
}

impl From<CountEngineArg> for CountEngine {
    fn from(value: CountEngineArg) -> Self {
        match value {
            CountEngineArg::Table => CountEngine::Table,
            CountEngineArg::Closed => CountEngine::ClosedForm,
        }
    }
}

#[derive(Debug, Args)]
pub struct AggregateArgs {
    #[arg(long)]
    pub depth: Depth,
    #[arg(long, allow_negative_numbers = true)]
    pub terminal: Level,
    /// CSV file with a `level,weight` header.
    #[arg(long, conflicts_with_all = ["weight_base", "weight_step"])]
    pub weights: Option<PathBuf>,
    /// Affine weights: weight(k) = base + step * k.
    #[arg(long, allow_hyphen_values = true)]
    pub weight_base: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub weight_step: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 4)]
    pub min_depth: Depth,
    #[arg(long, default_value_t = 12)]
    pub max_depth: Depth,
    #[arg(long, value_enum, default_value_t = BenchEngine::Count)]
    pub engine: BenchEngine,
    #[arg(long, value_enum, default_value_t = KstarPolicy::Worst)]
    pub kstar_policy: KstarPolicy,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Zero the wall-time column for byte-reproducible output.
    #[arg(long)]
    pub no_timing: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelfcheckArgs {
    #[arg(long, default_value_t = 8)]
    pub max_depth: Depth,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn writer(out: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn guard_enumeration_depth(engine: &'static str, depth: Depth) -> Result<(), CliError> {
    if depth > MAX_DEPTH {
        return Err(CliError::EngineUnavailable {
            engine,
            depth,
            cap: MAX_DEPTH,
        });
    }
    Ok(())
}

fn run_enumerate(args: &EnumerateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    match args.engine {
        PathEngine::Unique => {
            guard_enumeration_depth("unique", args.depth)?;
            let (k_minus, k_plus) = position_bounds(args.depth, args.terminal).map_err(|_| {
                tripath::MassShiftError::OutOfRange {
                    depth: args.depth,
                    kstar: args.terminal,
                }
            })?;
            if args.seed_order {
                for state in massshift::stage_states(args.depth, args.terminal)? {
                    eprintln!(
                        "stage={} window=[{},{}] seed={} horizon={}",
                        state.stage,
                        state.window.0,
                        state.window.1,
                        state.seed,
                        state.mass_horizon()
                    );
                }
            }
            let records = massshift::enumerate_unique(args.depth, args.terminal)?
                .map(|item| TupleRecord::from_unique(&item, k_minus, k_plus));
            match args.format {
                Format::Jsonl => {
                    for record in records {
                        serde_json::to_writer(&mut *out, &record)?;
                        writeln!(out)?;
                    }
                }
                Format::Json => {
                    serde_json::to_writer(&mut *out, &records.collect::<Vec<_>>())?;
                    writeln!(out)?;
                }
                Format::Csv | Format::Text => {
                    writeln!(out, "k_minus,counts,stage,m")?;
                    for r in records {
                        let counts: Vec<String> = r.counts.iter().map(|c| c.to_string()).collect();
                        writeln!(
                            out,
                            "{},\"{}\",{},{}",
                            r.k_minus,
                            counts.join(","),
                            r.stage,
                            r.m
                        )?;
                    }
                }
            }
        }
        engine => {
            let paths: Box<dyn Iterator<Item = tripath::PositionSeq>> = match engine {
                PathEngine::Dfs => Box::new(oracle::dfs_enumerate(args.depth, args.terminal)?),
                PathEngine::Memo => {
                    Box::new(oracle::dfs_enumerate_memo(args.depth, args.terminal)?)
                }
                PathEngine::Lexgen => {
                    guard_enumeration_depth("lexgen", args.depth)?;
                    Box::new(lexgen::enumerate_all(args.depth, args.terminal)?)
                }
                PathEngine::Unique => unreachable!(),
            };
            let records = paths.map(|p| PathRecord::from_path(&p));
            match args.format {
                Format::Jsonl => {
                    for record in records {
                        serde_json::to_writer(&mut *out, &record)?;
                        writeln!(out)?;
                    }
                }
                Format::Json => {
                    serde_json::to_writer(&mut *out, &records.collect::<Vec<_>>())?;
                    writeln!(out)?;
                }
                Format::Csv | Format::Text => {
                    writeln!(out, "positions")?;
                    for r in records {
                        let cells: Vec<String> =
                            r.positions.iter().map(|k| k.to_string()).collect();
                        writeln!(out, "\"{}\"", cells.join(","))?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn run_count(args: &CountArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut report =
        massshift::count_total_with(args.depth, args.terminal, args.count_engine.into())?;
    if args.check_oracle {
        report.verify_against_oracle(oracle::DEFAULT_DEPTH_CAP)?;
    }
    let discrepancies: Vec<DiscrepancyRecord> =
        massshift::closed_form_discrepancies(args.depth, args.terminal)?
            .iter()
            .map(DiscrepancyRecord::from_discrepancy)
            .collect();
    let record = CountRecord::from_report(&report, discrepancies);
    match args.format {
        Format::Csv => {
            writeln!(out, "stage,count")?;
            for (stage, count) in &record.per_stage {
                writeln!(out, "{stage},{count}")?;
            }
            writeln!(out, "total,{}", record.total)?;
        }
        _ => {
            serde_json::to_writer(&mut *out, &record)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn parse_weights(args: &AggregateArgs) -> Result<WeightTable, CliError> {
    if let Some(path) = &args.weights {
        let text = std::fs::read_to_string(path)?;
        return Ok(WeightTable::from_csv(&text)?);
    }
    let base: Decimal = args
        .weight_base
        .as_deref()
        .unwrap_or("0")
        .parse()
        .map_err(CliError::Aggregate)?;
    let step: Decimal = args
        .weight_step
        .as_deref()
        .unwrap_or("0")
        .parse()
        .map_err(CliError::Aggregate)?;
    Ok(WeightTable::affine(base, step))
}

/// Distinct-value count past which `aggregate` warns about memory use.
pub const VALUE_WARN_THRESHOLD: usize = 100_000;

fn run_aggregate(args: &AggregateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let weights = parse_weights(args)?;
    let distribution = aggregate::path_sum_distribution(args.depth, args.terminal, &weights)?;
    if distribution.len() > VALUE_WARN_THRESHOLD {
        eprintln!(
            "warning: {} distinct path-sum values; consider coarser weights",
            distribution.len()
        );
    }
    let average = distribution
        .mean()
        .ok_or(tripath::AggregateError::EmptyTerminal {
            depth: args.depth,
            kstar: args.terminal,
        })?;
    let mut map = serde_json::Map::new();
    for (value, count) in distribution.entries() {
        map.insert(
            distribution.format_value(value),
            serde_json::Value::String(count.to_string()),
        );
    }
    let record = AggregateRecord {
        depth: args.depth,
        kstar: args.terminal,
        weights: match &args.weights {
            Some(path) => format!("file:{}", path.display()),
            None => format!(
                "affine(base={},step={})",
                args.weight_base.as_deref().unwrap_or("0"),
                args.weight_step.as_deref().unwrap_or("0")
            ),
        },
        distribution: map,
        total_paths: distribution.total_paths().to_string(),
        distinct_values: distribution.len(),
        average,
    };
    match args.format {
        Format::Csv => {
            writeln!(out, "value,count")?;
            for (value, count) in distribution.entries() {
                writeln!(out, "{},{}", distribution.format_value(value), count)?;
            }
        }
        _ => {
            serde_json::to_writer(&mut *out, &record)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn run_bench_cmd(args: &BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (records, summary) = bench::run_bench(
        args.min_depth,
        args.max_depth,
        args.engine,
        args.kstar_policy,
        !args.no_timing,
    )?;
    match args.format {
        Format::Json => {
            #[derive(serde::Serialize)]
            struct Combined<'a> {
                records: &'a [BenchRecord],
                summary: &'a bench::BenchSummary,
            }
            serde_json::to_writer(
                &mut *out,
                &Combined {
                    records: &records,
                    summary: &summary,
                },
            )?;
            writeln!(out)?;
        }
        _ => {
            writeln!(out, "{}", BenchRecord::csv_header())?;
            for record in &records {
                writeln!(out, "{}", record.to_csv_row())?;
            }
            eprintln!(
                "fit: C={:.6} gamma={:.5} rho={:.4}; speedup strictly increasing: {}",
                summary.fit.fitted_c,
                summary.fit.gamma,
                summary.fit.rho,
                summary.speedup_strictly_increasing
            );
        }
    }
    Ok(())
}

fn run_selfcheck_cmd(args: &SelfcheckArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let report = selfcheck::run_selfcheck(args.max_depth);
    match args.format {
        Format::Json => {
            serde_json::to_writer(&mut *out, &report)?;
            writeln!(out)?;
        }
        _ => {
            for check in &report.checks {
                writeln!(
                    out,
                    "{}  {} — {}",
                    if check.passed { "PASS" } else { "FAIL" },
                    check.name,
                    check.detail
                )?;
            }
            writeln!(
                out,
                "closed-form ledger: {} entries",
                report.discrepancies.len()
            )?;
            for d in &report.discrepancies {
                writeln!(
                    out,
                    "DISCREPANCY D={} kstar={} stage={} i={} table={} closed={}",
                    d.depth, d.kstar, d.stage, d.i, d.table, d.closed
                )?;
            }
            writeln!(
                out,
                "{}",
                if report.passed {
                    "ALL CHECKS PASSED"
                } else {
                    "FAILURES PRESENT"
                }
            )?;
        }
    }
    if report.passed {
        Ok(())
    } else {
        Err(CliError::SelfCheckFailed)
    }
}

/// Executes one parsed command; the process exit code is 0 on `Ok`, 1 on
/// `Err` (argument parsing exits 2 before we get here).
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let out_path = match &cli.command {
        Command::Enumerate(a) => &a.out,
        Command::Count(a) => &a.out,
        Command::Aggregate(a) => &a.out,
        Command::Bench(a) => &a.out,
        Command::Selfcheck(a) => &a.out,
    };
    let mut out = writer(out_path)?;
    match &cli.command {
        Command::Enumerate(args) => run_enumerate(args, &mut out)?,
        Command::Count(args) => run_count(args, &mut out)?,
        Command::Aggregate(args) => run_aggregate(args, &mut out)?,
        Command::Bench(args) => run_bench_cmd(args, &mut out)?,
        Command::Selfcheck(args) => run_selfcheck_cmd(args, &mut out)?,
    }
    out.flush()?;
    Ok(())
}
