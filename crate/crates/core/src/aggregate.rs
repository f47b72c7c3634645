//! Exact weighted aggregation over paths.
//!
//! Every level carries a weight; a path's value is the sum of the weights it
//! visits. Instead of touching each of the up-to-`3^D` paths, the forward
//! dynamic program carries a value-to-count map per `(depth, level)` cell, and
//! the class route evaluates one weighted sum per histogram. Weights are
//! exact decimals so equal path sums collide exactly, never approximately.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::cardinality::CardinalityTuple;
use crate::lattice::{Depth, Level};
use crate::oracle::ClassTable;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AggregateError {
    #[error("terminal level {kstar} is unreachable at depth {depth}")]
    OutOfRange { depth: Depth, kstar: Level },
    #[error("no path reaches level {kstar} at depth {depth}")]
    EmptyTerminal { depth: Depth, kstar: Level },
    #[error("no weight defined for level {level}")]
    MissingWeight { level: Level },
    #[error("cannot parse {0}")]
    Parse(String),
}

/// Exact decimal `mantissa / 10^scale`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decimal {
    mantissa: i128,
    scale: u32,
}

impl Decimal {
    pub fn new(mantissa: i128, scale: u32) -> Self {
        Self { mantissa, scale }
    }

    pub fn from_int(value: i64) -> Self {
        Self {
            mantissa: value as i128,
            scale: 0,
        }
    }

    pub fn mantissa(&self) -> i128 {
        self.mantissa
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn to_f64(&self) -> f64 {
        self.mantissa as f64 / 10f64.powi(self.scale as i32)
    }

    fn rescaled(&self, scale: u32) -> i128 {
        debug_assert!(scale >= self.scale);
        self.mantissa * 10i128.pow(scale - self.scale)
    }
}

impl FromStr for Decimal {
    type Err = AggregateError;

    fn from_str(s: &str) -> Result<Self, AggregateError> {
        let err = || AggregateError::Parse(s.to_string());
        let t = s.trim();
        let (sign, digits) = match t.strip_prefix('-') {
            Some(rest) => (-1i128, rest),
            None => (1i128, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int_part, frac_part) = match digits.split_once('.') {
            Some((i, f)) => (i, f),
            None => (digits, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(err());
        }
        let mut mantissa: i128 = 0;
        for c in int_part.chars().chain(frac_part.chars()) {
            mantissa = mantissa
                .checked_mul(10)
                .and_then(|m| m.checked_add((c as u8 - b'0') as i128))
                .ok_or_else(err)?;
        }
        Ok(Decimal {
            mantissa: sign * mantissa,
            scale: frac_part.len() as u32,
        })
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_scaled(self.mantissa, self.scale))
    }
}

/// Renders `mantissa / 10^scale` without trailing fractional zeros.
pub(crate) fn format_scaled(mantissa: i128, scale: u32) -> String {
    if scale == 0 {
        return mantissa.to_string();
    }
    let sign = if mantissa < 0 { "-" } else { "" };
    let abs = mantissa.unsigned_abs();
    let base = 10u128.pow(scale);
    let int = abs / base;
    let mut frac = format!("{:0width$}", abs % base, width = scale as usize);
    while frac.ends_with('0') {
        frac.pop();
    }
    if frac.is_empty() {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// Level weights: either the affine family `base + step * level` or an
/// explicit per-level table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightTable {
    Affine { base: Decimal, step: Decimal },
    Table(BTreeMap<Level, Decimal>),
}

impl WeightTable {
    pub fn affine(base: Decimal, step: Decimal) -> Self {
        WeightTable::Affine { base, step }
    }

    /// Parses `level,weight` rows with a header line.
    pub fn from_csv(text: &str) -> Result<Self, AggregateError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        match lines.next() {
            Some(header) if header.trim().eq_ignore_ascii_case("level,weight") => {}
            other => {
                return Err(AggregateError::Parse(format!(
                    "expected header 'level,weight', got {:?}",
                    other.unwrap_or("")
                )))
            }
        }
        let mut table = BTreeMap::new();
        for line in lines {
            let (level, weight) = line
                .split_once(',')
                .ok_or_else(|| AggregateError::Parse(line.to_string()))?;
            let level: Level = level
                .trim()
                .parse()
                .map_err(|_| AggregateError::Parse(line.to_string()))?;
            table.insert(level, weight.parse::<Decimal>()?);
        }
        Ok(WeightTable::Table(table))
    }

    pub fn weight(&self, level: Level) -> Result<Decimal, AggregateError> {
        match self {
            WeightTable::Affine { base, step } => {
                let scale = base.scale.max(step.scale);
                let mantissa = base.rescaled(scale) + step.rescaled(scale) * level as i128;
                Ok(Decimal::new(mantissa, scale))
            }
            WeightTable::Table(map) => map
                .get(&level)
                .copied()
                .ok_or(AggregateError::MissingWeight { level }),
        }
    }

    /// Common scale and integer numerators for every level in the range.
    fn scaled(&self, lo: Level, hi: Level) -> Result<(u32, BTreeMap<Level, i128>), AggregateError> {
        let mut scale = 0;
        for level in lo..=hi {
            scale = scale.max(self.weight(level)?.scale());
        }
        let mut values = BTreeMap::new();
        for level in lo..=hi {
            values.insert(level, self.weight(level)?.rescaled(scale));
        }
        Ok((scale, values))
    }
}

/// Exact distribution of path-sum values: value numerator -> path count,
/// all numerators sharing one decimal scale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueDistribution {
    scale: u32,
    entries: BTreeMap<i128, BigUint>,
}

impl ValueDistribution {
    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(numerator, count)` pairs in increasing value order.
    pub fn entries(&self) -> impl Iterator<Item = (i128, &BigUint)> {
        self.entries.iter().map(|(&v, c)| (v, c))
    }

    /// Count of paths whose sum equals the given decimal value.
    pub fn count_for(&self, value: Decimal) -> BigUint {
        if value.scale() > self.scale {
            // Finer than our grid: representable only if trailing digits are zero.
            let base = 10i128.pow(value.scale() - self.scale);
            if value.mantissa() % base != 0 {
                return BigUint::zero();
            }
            return self
                .entries
                .get(&(value.mantissa() / base))
                .cloned()
                .unwrap_or_else(BigUint::zero);
        }
        let num = value.mantissa() * 10i128.pow(self.scale - value.scale());
        self.entries
            .get(&num)
            .cloned()
            .unwrap_or_else(BigUint::zero)
    }

    pub fn total_paths(&self) -> BigUint {
        self.entries.values().sum()
    }

    /// Value rendered as a decimal string, e.g. `102` or `-3.5`.
    pub fn format_value(&self, numerator: i128) -> String {
        format_scaled(numerator, self.scale)
    }

    pub fn mean(&self) -> Option<f64> {
        let total = self.total_paths();
        if total.is_zero() {
            return None;
        }
        let mut weighted = BigInt::zero();
        for (value, count) in self.entries() {
            weighted += BigInt::from(value) * BigInt::from(count.clone());
        }
        let num = weighted.to_f64()?;
        let den = total.to_f64()? * 10f64.powi(self.scale as i32);
        Some(num / den)
    }
}

fn reachable_levels(depth: Depth, kstar: Level, d: Depth) -> (Level, Level) {
    let d_i = d as Level;
    let back = (depth - d) as Level;
    ((-d_i).max(kstar - back), d_i.min(kstar + back))
}

/// Distribution of `sum_d w(level_d)` over all paths ending at `(kstar,
/// depth)`, by a forward pass that merges equal values as it goes.
pub fn path_sum_distribution(
    depth: Depth,
    kstar: Level,
    weights: &WeightTable,
) -> Result<ValueDistribution, AggregateError> {
    if kstar.unsigned_abs() as usize > depth {
        return Err(AggregateError::OutOfRange { depth, kstar });
    }
    let (lo, hi) = crate::lattice::position_bounds(depth, kstar).expect("checked range");
    let (scale, w) = weights.scaled(lo, hi)?;
    let mut layer: BTreeMap<Level, BTreeMap<i128, BigUint>> = BTreeMap::new();
    layer.insert(0, BTreeMap::from([(w[&0], BigUint::from(1u32))]));
    for d in 1..=depth {
        let (level_lo, level_hi) = reachable_levels(depth, kstar, d);
        let mut next: BTreeMap<Level, BTreeMap<i128, BigUint>> = BTreeMap::new();
        for (level, values) in &layer {
            for step in [-1, 0, 1] {
                let child = level + step;
                if child < level_lo || child > level_hi {
                    continue;
                }
                let w_child = w[&child];
                let cell = next.entry(child).or_default();
                for (value, count) in values {
                    *cell.entry(value + w_child).or_insert_with(BigUint::zero) += count.clone();
                }
            }
        }
        layer = next;
    }
    let entries = layer.remove(&kstar).unwrap_or_default();
    Ok(ValueDistribution { scale, entries })
}

/// `sum_p p * N_p / sum_p N_p` over the path-sum distribution.
pub fn lebesgue_average(
    depth: Depth,
    kstar: Level,
    weights: &WeightTable,
) -> Result<f64, AggregateError> {
    if kstar.unsigned_abs() as usize > depth {
        return Err(AggregateError::EmptyTerminal { depth, kstar });
    }
    path_sum_distribution(depth, kstar, weights)?
        .mean()
        .ok_or(AggregateError::EmptyTerminal { depth, kstar })
}

/// Builds the same distribution from a class table: one weighted sum per
/// histogram, scaled by the class multiplicity.
pub fn class_aggregate(
    classes: &ClassTable,
    weights: &WeightTable,
) -> Result<ValueDistribution, AggregateError> {
    let mut lo = 0;
    let mut hi = 0;
    for (key, _) in classes.classes() {
        lo = lo.min(key.k_min());
        hi = hi.max(key.k_max());
    }
    let (scale, w) = weights.scaled(lo, hi)?;
    let mut entries: BTreeMap<i128, BigUint> = BTreeMap::new();
    for (key, multiplicity) in classes.classes() {
        let value = scaled_weighted_sum(key, &w);
        *entries.entry(value).or_insert_with(BigUint::zero) += BigUint::from(multiplicity);
    }
    Ok(ValueDistribution { scale, entries })
}

fn scaled_weighted_sum(tuple: &CardinalityTuple, w: &BTreeMap<Level, i128>) -> i128 {
    tuple
        .entries()
        .map(|(level, count)| count as i128 * w[&level])
        .sum()
}
