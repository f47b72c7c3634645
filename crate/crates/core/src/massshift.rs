//! Stage-wise mass-shifting enumeration of unique path classes.
//!
//! Classes of paths ending at `(kstar, depth)` are keyed by their visit
//! histograms. The enumeration proceeds in stages: stage `M` covers exactly
//! the histograms whose deepest visited level is `-M` (for `kstar >= 0`).
//! Each stage starts from a seed tuple — the histogram of the extremal path
//! of that stage — and walks every admissible redistribution of the seed's
//! surplus mass in strictly decreasing mixed-lexicographic order. A shift
//! step consumes the seed's right edge, opens the next negative level, and
//! reseeds the following stage.
//!
//! Counting is a closed sum over weak compositions and never materializes
//! tuples: each unit of drained mass shrinks the redistribution span by the
//! tabled schedule, and the per-stage counts use exact big-integer binomials.
//! Two counting engines are provided. The slot-schedule engine (`Table`) is
//! normative. The single-formula engine (`ClosedForm`) folds the two parity
//! schedules into one expression with a global toggle; that fold over-counts
//! at odd masses in the top-heavy regime, and the discrepancy scan reports
//! every spot where the two disagree.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::cardinality::{seed_tuple, validate_tuple, BetaTag, CardinalityTuple};
use crate::lattice::{position_bounds, Depth, Level};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MassShiftError {
    #[error("terminal level {kstar} is unreachable at depth {depth}")]
    OutOfRange { depth: Depth, kstar: Level },
    #[error("no shift remains: the stage window has hit its boundary")]
    ShiftExhausted,
}

/// Which per-stage counting engine produced a total.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountEngine {
    Table,
    ClosedForm,
}

impl CountEngine {
    pub fn name(self) -> &'static str {
        match self {
            CountEngine::Table => "table",
            CountEngine::ClosedForm => "closed",
        }
    }
}

/// `C(n, k)` with the usual zero outside `0 <= k <= n`.
fn binomial(n: i64, k: i64) -> BigUint {
    if k < 0 || n < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i; // exact: C(n-k+i, i) is an integer at every step
    }
    acc
}

/// Number of ways to spread `mass` indistinct units over `slots` ordered
/// slots: `C(mass + slots - 1, slots - 1)`, exactly.
pub fn weak_composition_count(mass: u64, slots: u64) -> BigUint {
    if slots == 0 {
        return if mass == 0 {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    }
    binomial((mass + slots - 1) as i64, (slots - 1) as i64)
}

/// All length-`slots` nonnegative tuples summing to `mass`, emitted once
/// each with the rightmost slot drained first (descending colexicographic
/// order): `(0,..,0,mass)` first, `(mass,0,..,0)` last.
pub struct WeakCompositions {
    current: Option<Vec<u32>>,
    fresh: bool,
}

pub fn enumerate_weak_compositions(mass: u32, slots: usize) -> WeakCompositions {
    let current = if slots == 0 {
        (mass == 0).then(Vec::new)
    } else {
        let mut first = vec![0u32; slots];
        first[slots - 1] = mass;
        Some(first)
    };
    WeakCompositions {
        current,
        fresh: true,
    }
}

impl Iterator for WeakCompositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.fresh {
            self.fresh = false;
            return self.current.clone();
        }
        let cur = self.current.as_mut()?;
        // Pull one unit left from the lowest-index loaded slot past 0 and
        // flush everything below it one slot down.
        let pivot = (1..cur.len()).find(|&q| cur[q] > 0)?;
        let spill = cur[0];
        cur[pivot] -= 1;
        cur[pivot - 1] = spill + 1;
        for slot in cur.iter_mut().take(pivot - 1) {
            *slot = 0;
        }
        self.current.clone()
    }
}

/// Cursor of the stage-wise enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageState {
    pub depth: Depth,
    /// Working terminal, always nonnegative (negative terminals mirror).
    pub kstar: Level,
    /// Outer stage index `M`.
    pub stage: u32,
    /// Active index window `[-M, k_plus - M]`; slides one left per shift.
    pub window: (Level, Level),
    /// Seed tuple of the stage: the largest element of its stage block.
    pub seed: CardinalityTuple,
    /// In-stage mass cursor.
    pub mass: u32,
    /// Where the terminal sits relative to the window's left edge.
    pub kstar_geo: Level,
    /// Governs the remaining mass horizon: `kstar + 2 * stage`.
    pub k_eff: Level,
    pub beta: BetaTag,
    /// Window width `k_plus + 1`; constant across stages.
    pub slot_count: u32,
}

impl StageState {
    /// Units of mass the in-stage schedule may redistribute.
    pub fn mass_horizon(&self) -> u32 {
        (self.depth as i64 - self.k_eff as i64).max(0) as u32
    }
}

/// Number of shifts available: the window slides left until it pins either
/// the terminal against its right edge or the lowest level against its left.
pub fn stage_limit(depth: Depth, kstar: Level) -> Result<u32, MassShiftError> {
    let terminal = kstar.abs();
    let (k_minus, k_plus) = position_bounds(depth, terminal)
        .map_err(|_| MassShiftError::OutOfRange { depth, kstar })?;
    Ok(((k_plus - terminal).min(-k_minus)) as u32)
}

/// Stage 0: the all-nonnegative block, seeded by the highest path.
pub fn initial_stage(depth: Depth, kstar: Level) -> Result<StageState, MassShiftError> {
    if kstar < 0 || kstar as usize > depth {
        return Err(MassShiftError::OutOfRange { depth, kstar });
    }
    let (_, k_plus) = position_bounds(depth, kstar).expect("checked range");
    let (seed, beta) = seed_tuple(depth, kstar).expect("checked range");
    Ok(StageState {
        depth,
        kstar,
        stage: 0,
        window: (0, k_plus),
        seed,
        mass: 0,
        kstar_geo: kstar,
        k_eff: kstar,
        beta,
        slot_count: (k_plus + 1) as u32,
    })
}

/// One outer shift: consume the seed's right edge (one unit when it holds 1,
/// two when it holds 2), open a fresh slot one level further down with a
/// single visit, add a re-entry visit at the window's old left edge, and
/// slide the window. Returns the next stage's seed state; fails once the
/// window cannot move.
pub fn shift_reseed(state: &StageState) -> Result<StageState, MassShiftError> {
    let limit = stage_limit(state.depth, state.kstar)?;
    if state.stage >= limit {
        return Err(MassShiftError::ShiftExhausted);
    }
    let (lo, hi) = state.window;
    let edge = state.seed.count_at(hi);
    let seed = if edge == 0 {
        // Nothing to consume; the window slides and the seed passes through.
        state.seed.clone()
    } else {
        let mut edge_take = edge;
        if edge_take == 3 && state.kstar == 0 {
            edge_take = 2;
        }
        debug_assert!(edge_take == 1 || edge_take == 2, "seed edge out of shape");
        let mut counts: Vec<u32> = std::iter::once(1)
            .chain((lo..hi).map(|k| state.seed.count_at(k)))
            .collect();
        if edge_take == 1 {
            // The odd edge frees one unit; pair it by thinning the
            // rightmost doubled slot so the new seed stays extremal.
            match (1..counts.len()).rev().find(|&i| counts[i] >= 2) {
                Some(i) => {
                    counts[i] -= 1;
                    counts[1] += 1;
                }
                None => debug_assert!(false, "no doubled slot left of the edge"),
            }
        } else {
            counts[1] += 1;
        }
        let leftover = edge - edge_take;
        if leftover > 0 {
            counts.push(leftover); // level `hi` keeps what the guard spared
        }
        CardinalityTuple::new(lo - 1, counts)
    };
    debug_assert_eq!(seed.total_mass(), state.depth as u64 + 1);
    Ok(StageState {
        depth: state.depth,
        kstar: state.kstar,
        stage: state.stage + 1,
        window: (lo - 1, hi - 1),
        seed,
        mass: 0,
        kstar_geo: state.kstar + state.stage as Level + 1,
        k_eff: state.kstar + 2 * (state.stage as Level + 1),
        beta: state.beta,
        slot_count: state.slot_count,
    })
}

/// Slot span available to a redistribution of `mass` units, per the
/// parity-indexed schedule. `top_two` selects the regime where the seed's
/// right edge holds two visits (`depth - kstar` odd).
fn schedule_slots(ell: u32, mass: u32, top_two: bool) -> i64 {
    let ell = ell as i64;
    let mass = mass as i64;
    if mass == 0 {
        ell
    } else if top_two {
        ell - (mass + 1) / 2
    } else {
        ell - (mass + 2) / 2
    }
}

fn table_summand(ell: u32, mass: u32, top_two: bool) -> BigUint {
    if mass == 0 {
        return BigUint::one();
    }
    let slots = schedule_slots(ell, mass, top_two);
    if slots <= 0 {
        return BigUint::zero();
    }
    weak_composition_count(mass as u64, slots as u64)
}

fn closed_summand(ell: u32, mass: u32, top_two: bool) -> BigUint {
    let ell = ell as i64;
    let mass = mass as i64;
    let c = (mass + 2) / 2;
    let n = mass + ell - c - 1;
    let mut term = binomial(n, ell - c - 1);
    if top_two {
        term += binomial(n, ell - c);
    }
    term
}

fn top_two_regime(depth: Depth, kstar: Level) -> bool {
    (depth as i64 - kstar.abs() as i64) % 2 == 1
}

fn stage_total(
    ell: u32,
    horizon: u32,
    top_two: bool,
    summand: fn(u32, u32, bool) -> BigUint,
) -> BigUint {
    (0..=horizon).map(|i| summand(ell, i, top_two)).sum()
}

/// Stage contribution under the normative slot schedule.
pub fn stage_count(state: &StageState) -> BigUint {
    stage_total(
        state.slot_count,
        state.mass_horizon(),
        top_two_regime(state.depth, state.kstar),
        table_summand,
    )
}

/// Stage contribution under the single closed formula, kept for comparison.
pub fn stage_count_closed(state: &StageState) -> BigUint {
    stage_total(
        state.slot_count,
        state.mass_horizon(),
        top_two_regime(state.depth, state.kstar),
        closed_summand,
    )
}

/// Exact class count with per-stage breakdown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub depth: Depth,
    pub kstar: Level,
    pub per_stage: Vec<(u32, BigUint)>,
    pub total: BigUint,
    pub engine: CountEngine,
    pub oracle_checked: bool,
}

impl CountReport {
    /// Re-derives the count from the exhaustive oracle and records the
    /// comparison. Only feasible below the oracle's depth cap.
    pub fn verify_against_oracle(
        &mut self,
        cap: Depth,
    ) -> Result<bool, crate::oracle::OracleError> {
        let table = crate::oracle::oracle_classes_with_cap(self.depth, self.kstar, cap)?;
        let ok = BigUint::from(table.len()) == self.total;
        self.oracle_checked = ok;
        Ok(ok)
    }
}

/// Total number of distinct classes at `(kstar, depth)`, summed over stages
/// with the normative engine. Pure arithmetic; depth is unbounded.
pub fn count_total(depth: Depth, kstar: Level) -> Result<CountReport, MassShiftError> {
    count_total_with(depth, kstar, CountEngine::Table)
}

pub fn count_total_with(
    depth: Depth,
    kstar: Level,
    engine: CountEngine,
) -> Result<CountReport, MassShiftError> {
    if kstar.unsigned_abs() as usize > depth {
        return Err(MassShiftError::OutOfRange { depth, kstar });
    }
    let terminal = kstar.abs();
    let limit = stage_limit(depth, kstar)?;
    let (_, k_plus) = position_bounds(depth, terminal).expect("checked range");
    let ell = (k_plus + 1) as u32;
    let top_two = top_two_regime(depth, kstar);
    let summand = match engine {
        CountEngine::Table => table_summand as fn(u32, u32, bool) -> BigUint,
        CountEngine::ClosedForm => closed_summand,
    };
    let mut per_stage = Vec::with_capacity(limit as usize + 1);
    let mut total = BigUint::zero();
    for stage in 0..=limit {
        let horizon = (depth as i64 - terminal as i64 - 2 * stage as i64).max(0) as u32;
        let count = stage_total(ell, horizon, top_two, summand);
        total += count.clone();
        per_stage.push((stage, count));
    }
    Ok(CountReport {
        depth,
        kstar,
        per_stage,
        total,
        engine,
        oracle_checked: false,
    })
}

/// One spot where the two counting engines disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub depth: Depth,
    pub kstar: Level,
    pub stage: u32,
    pub mass: u32,
    pub table: BigUint,
    pub closed: BigUint,
}

/// Every `(stage, mass)` where the closed formula departs from the slot
/// schedule for this terminal.
pub fn closed_form_discrepancies(
    depth: Depth,
    kstar: Level,
) -> Result<Vec<Discrepancy>, MassShiftError> {
    if kstar.unsigned_abs() as usize > depth {
        return Err(MassShiftError::OutOfRange { depth, kstar });
    }
    let terminal = kstar.abs();
    let limit = stage_limit(depth, kstar)?;
    let (_, k_plus) = position_bounds(depth, terminal).expect("checked range");
    let ell = (k_plus + 1) as u32;
    let top_two = top_two_regime(depth, kstar);
    let mut out = Vec::new();
    for stage in 0..=limit {
        let horizon = (depth as i64 - terminal as i64 - 2 * stage as i64).max(0) as u32;
        for mass in 0..=horizon {
            let table = table_summand(ell, mass, top_two);
            let closed = closed_summand(ell, mass, top_two);
            if table != closed {
                out.push(Discrepancy {
                    depth,
                    kstar,
                    stage,
                    mass,
                    table,
                    closed,
                });
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// In-stage enumeration.
//
// A stage tuple splits into a negative part (visits at -1..-M) and a positive
// part (visits at 0..window-top). The two are independent once the structural
// floors are respected, so the stage walks negative parts in ascending
// lexicographic order (nearest-zero level first) and, for each, positive
// parts in descending colexicographic order. That composite order is exactly
// the descending mixed-lexicographic order on the stage block.
// ---------------------------------------------------------------------------

/// Valid positive parts `(c_0..c_top)` of a fixed total, descending colex.
struct PosParts {
    kstar: usize,
    top: usize,
    mixed: bool,
    total: u32,
    frames: Vec<PosFrame>,
    complete: bool,
    done: bool,
}

#[derive(Debug, Clone, Copy)]
struct PosFrame {
    level: usize,
    value: u32,
    seen_in: bool,
    mass_before: u32,
    // Levels above the terminal with no mass above them run their nonzero
    // candidates first and finish with a single zero candidate.
    zero_phase: bool,
}

impl PosParts {
    fn new(total: u32, kstar: usize, top: usize, mixed: bool) -> Self {
        debug_assert!(top >= kstar);
        Self {
            kstar,
            top,
            mixed,
            total,
            frames: Vec::with_capacity(top + 1),
            complete: false,
            done: false,
        }
    }

    /// Least mass the levels `0..=level_below` can absorb, given whether any
    /// level above the terminal already holds mass.
    fn min_completion(&self, level_below: i64, seen: bool) -> u32 {
        if level_below < 0 {
            return 0;
        }
        let ks = self.kstar as i64;
        let mixed = self.mixed as i64;
        let out = if ks == 0 {
            if seen {
                2 * level_below + 2 + mixed
            } else {
                1 + mixed
            }
        } else {
            let c0 = 1 + mixed;
            if level_below >= ks {
                if seen {
                    2 * (level_below - ks) + 2 + (ks - 1) + c0
                } else {
                    ks + c0
                }
            } else {
                level_below + c0
            }
        };
        out as u32
    }

    fn zero_floor(&self, seen: bool) -> u32 {
        if self.kstar == 0 {
            1 + seen as u32 + self.mixed as u32
        } else if self.mixed {
            2
        } else {
            1
        }
    }

    fn first_candidate(&self, level: usize, seen_in: bool, mass_before: u32) -> Option<PosFrame> {
        let frame = |value, zero_phase| PosFrame {
            level,
            value,
            seen_in,
            mass_before,
            zero_phase,
        };
        if level == 0 {
            return (mass_before >= self.zero_floor(seen_in)).then(|| frame(mass_before, false));
        }
        if level > self.kstar {
            if seen_in {
                let vmax = mass_before as i64 - self.min_completion(level as i64 - 1, true) as i64;
                return (vmax >= 2).then(|| frame(vmax as u32, false));
            }
            let vmax = mass_before as i64 - self.min_completion(level as i64 - 1, true) as i64;
            if vmax >= 1 {
                return Some(frame(vmax as u32, false));
            }
            return (mass_before >= self.min_completion(level as i64 - 1, false))
                .then(|| frame(0, true));
        }
        let floor = if level == self.kstar && seen_in { 2 } else { 1 };
        let vmax = mass_before as i64 - self.min_completion(level as i64 - 1, seen_in) as i64;
        (vmax >= floor as i64).then(|| frame(vmax as u32, false))
    }

    fn advance_frame(&self, frame: &mut PosFrame) -> bool {
        if frame.level == 0 || frame.zero_phase {
            return false;
        }
        if frame.level > self.kstar {
            if frame.seen_in {
                if frame.value > 2 {
                    frame.value -= 1;
                    return true;
                }
                return false;
            }
            if frame.value > 1 {
                frame.value -= 1;
                return true;
            }
            if frame.mass_before >= self.min_completion(frame.level as i64 - 1, false) {
                frame.value = 0;
                frame.zero_phase = true;
                return true;
            }
            return false;
        }
        let floor = if frame.level == self.kstar && frame.seen_in {
            2
        } else {
            1
        };
        if frame.value > floor {
            frame.value -= 1;
            return true;
        }
        false
    }

    fn seen_out(&self, frame: &PosFrame) -> bool {
        if frame.level > self.kstar {
            frame.seen_in || frame.value > 0
        } else {
            frame.seen_in
        }
    }

    fn backtrack(&mut self) {
        self.complete = false;
        while let Some(mut frame) = self.frames.pop() {
            if self.advance_frame(&mut frame) {
                self.frames.push(frame);
                return;
            }
        }
        self.done = true;
    }

    fn snapshot(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.top + 1];
        for frame in &self.frames {
            counts[frame.level] = frame.value;
        }
        counts
    }
}

impl Iterator for PosParts {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        if self.complete {
            self.backtrack();
        }
        loop {
            if self.done {
                return None;
            }
            if self.frames.len() == self.top + 1 {
                self.complete = true;
                return Some(self.snapshot());
            }
            let level = self.top - self.frames.len();
            let (seen_in, mass_before) = match self.frames.last() {
                Some(f) => (self.seen_out(f), f.mass_before - f.value),
                None => (false, self.total),
            };
            match self.first_candidate(level, seen_in, mass_before) {
                Some(frame) => self.frames.push(frame),
                None => self.backtrack(),
            }
        }
    }
}

/// Negative parts `(c_-1, .., c_-M)` in ascending lexicographic order:
/// floors are two visits per pass-through level and one at the deepest.
struct NegParts {
    floors: Vec<u32>,
    budget: u32,
    current: Option<Vec<u32>>,
    fresh: bool,
}

impl NegParts {
    fn new(stage: u32, budget: u32) -> Self {
        let mut floors = vec![2u32; stage as usize];
        if let Some(last) = floors.last_mut() {
            *last = 1;
        }
        let start = (floors.iter().sum::<u32>() <= budget).then(|| floors.clone());
        Self {
            floors,
            budget,
            current: start,
            fresh: true,
        }
    }
}

impl Iterator for NegParts {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.fresh {
            self.fresh = false;
            return self.current.clone();
        }
        let cur = self.current.as_mut()?;
        if cur.is_empty() {
            self.current = None;
            return None;
        }
        let total: u32 = cur.iter().sum();
        if total < self.budget {
            *cur.last_mut().expect("non-empty") += 1;
            return self.current.clone();
        }
        for j in (0..cur.len() - 1).rev() {
            let prefix: u32 = cur[..=j].iter().sum();
            let reset: u32 = self.floors[j + 1..].iter().sum();
            if prefix + 1 + reset <= self.budget {
                cur[j] += 1;
                let tail = self.floors[j + 1..].to_vec();
                cur[j + 1..].copy_from_slice(&tail);
                return self.current.clone();
            }
        }
        self.current = None;
        None
    }
}

/// All tuples of one stage with their in-stage mass labels, in strictly
/// decreasing mixed-lexicographic order.
struct StageTuples {
    stage: u32,
    window_lo: Level,
    top: usize,
    kstar: usize,
    total: u32,
    seed_tail: Vec<u32>,
    neg: NegParts,
    current_neg: Option<Vec<u32>>,
    pos: PosParts,
}

impl StageTuples {
    fn new(state: &StageState) -> Self {
        let (lo, hi) = state.window;
        let kstar = state.kstar as usize;
        debug_assert!(hi >= state.kstar);
        let top = hi as usize;
        let total = state.depth as u32 + 1;
        let seed_tail = state.seed.padded_counts(state.kstar, hi);
        let mixed = state.stage > 0;
        let min_pos = if kstar == 0 { 2 } else { kstar as u32 + 2 };
        let mut neg = NegParts::new(state.stage, total.saturating_sub(min_pos));
        let (current_neg, pos) = if state.stage == 0 {
            (Some(Vec::new()), PosParts::new(total, kstar, top, false))
        } else {
            match neg.next() {
                Some(nu) => {
                    let spent: u32 = nu.iter().sum();
                    let pos = PosParts::new(total - spent, kstar, top, mixed);
                    (Some(nu), pos)
                }
                None => (None, PosParts::new(0, kstar, top, mixed)),
            }
        };
        Self {
            stage: state.stage,
            window_lo: lo,
            top,
            kstar,
            total,
            seed_tail,
            neg,
            current_neg,
            pos,
        }
    }

    fn mass_label(&self, positive: &[u32]) -> u32 {
        self.seed_tail
            .iter()
            .zip(&positive[self.kstar..])
            .map(|(&s, &c)| s.saturating_sub(c))
            .sum()
    }
}

impl Iterator for StageTuples {
    type Item = (CardinalityTuple, u32);

    fn next(&mut self) -> Option<(CardinalityTuple, u32)> {
        loop {
            let nu = self.current_neg.as_ref()?;
            if let Some(positive) = self.pos.next() {
                let m = self.mass_label(&positive);
                let mut counts: Vec<u32> = nu.iter().rev().copied().collect();
                counts.extend_from_slice(&positive);
                let tuple = CardinalityTuple::new(self.window_lo, counts);
                return Some((tuple, m));
            }
            if self.stage == 0 {
                self.current_neg = None;
                return None;
            }
            match self.neg.next() {
                Some(nu) => {
                    let spent: u32 = nu.iter().sum();
                    self.pos = PosParts::new(self.total - spent, self.kstar, self.top, true);
                    self.current_neg = Some(nu);
                }
                None => {
                    self.current_neg = None;
                    return None;
                }
            }
        }
    }
}

/// One enumerated class key with its stage coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniqueTuple {
    pub tuple: CardinalityTuple,
    pub stage: u32,
    pub m: u32,
}

/// Streams every distinct class key of `(kstar, depth)` exactly once:
/// stages in increasing order, tuples strictly decreasing within each stage.
/// Negative terminals run the mirrored enumeration and flip the keys.
pub struct UniqueTuples {
    mirror: bool,
    limit: u32,
    state: StageState,
    stage_iter: StageTuples,
    exhausted: bool,
}

pub fn enumerate_unique(depth: Depth, kstar: Level) -> Result<UniqueTuples, MassShiftError> {
    if kstar.unsigned_abs() as usize > depth {
        return Err(MassShiftError::OutOfRange { depth, kstar });
    }
    let state = initial_stage(depth, kstar.abs())?;
    let limit = stage_limit(depth, kstar)?;
    let stage_iter = StageTuples::new(&state);
    Ok(UniqueTuples {
        mirror: kstar < 0,
        limit,
        state,
        stage_iter,
        exhausted: false,
    })
}

impl Iterator for UniqueTuples {
    type Item = UniqueTuple;

    fn next(&mut self) -> Option<UniqueTuple> {
        loop {
            if self.exhausted {
                return None;
            }
            if let Some((tuple, m)) = self.stage_iter.next() {
                debug_assert!(validate_tuple(&tuple, self.state.depth, self.state.kstar));
                let tuple = if self.mirror { tuple.mirror() } else { tuple };
                return Some(UniqueTuple {
                    tuple,
                    stage: self.state.stage,
                    m,
                });
            }
            if self.state.stage >= self.limit {
                self.exhausted = true;
                return None;
            }
            self.state = shift_reseed(&self.state).expect("stage below limit");
            self.stage_iter = StageTuples::new(&self.state);
        }
    }
}

/// The seed chain `stage 0 ..= T`, handy for inspection and debug output.
pub fn stage_states(depth: Depth, kstar: Level) -> Result<Vec<StageState>, MassShiftError> {
    if kstar.unsigned_abs() as usize > depth {
        return Err(MassShiftError::OutOfRange { depth, kstar });
    }
    let mut state = initial_stage(depth, kstar.abs())?;
    let limit = stage_limit(depth, kstar)?;
    let mut out = Vec::with_capacity(limit as usize + 1);
    while state.stage < limit {
        let next = shift_reseed(&state)?;
        out.push(state);
        state = next;
    }
    out.push(state);
    Ok(out)
}
