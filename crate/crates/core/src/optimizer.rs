//! Camera selection over a [`BinaryCoverageMatrix`].
//!
//! * [`min_cover_exact`]: fewest columns covering every row.
//! * [`min_cover_greedy`]: classic largest-gain greedy cover.
//! * [`max_coverage_budget`]: exactly `k` columns covering the most rows.
//!
//! Both exact solvers first collapse the columns to their dominance-free
//! representatives: identical row-sets keep the lowest column index and a
//! column whose row-set is a strict subset of another's is dropped. Ties
//! are broken toward the lexicographically smallest sorted index set over
//! those representatives, which makes every answer reproducible and
//! independent of thread count.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::RowSet;
use crate::covermat::{BinaryCoverageMatrix, RowLabel};
use crate::exec::{map_range, Execution};

pub const DEFAULT_MAX_EVALUATIONS: u64 = 1_000_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum OptimizeError {
    #[error("infeasible: {} marker(s) are not seen by any camera pose: {}", rows.len(), list_rows(rows))]
    Infeasible { rows: Vec<RowLabel> },
    #[error("search aborted after {cap} evaluations; use greedy mode or a coarser grid")]
    EvaluationCap { cap: u64 },
    #[error("budget {k} exceeds the {m} available camera poses")]
    BudgetTooLarge { k: usize, m: usize },
}

fn list_rows(rows: &[RowLabel]) -> String {
    rows.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverOptions {
    pub execution: Execution,
    /// Search nodes allowed before giving up.
    pub max_evaluations: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            execution: Execution::Parallel,
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
        }
    }
}

impl SolverOptions {
    pub fn sequential() -> Self {
        Self {
            execution: Execution::Sequential,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacementSolution {
    /// Selected column indices, ascending.
    pub selected: Vec<usize>,
    /// Per-row coverage flag.
    pub covered: Vec<bool>,
    pub num_covered: usize,
    pub num_cameras: usize,
    pub optimal: bool,
    /// Number of equally good selections among the representative columns.
    pub tie_class_size: u64,
}

impl PlacementSolution {
    /// Evaluates `selected` against `a`.
    pub fn from_selection(
        a: &BinaryCoverageMatrix,
        mut selected: Vec<usize>,
        optimal: bool,
        ties: u64,
    ) -> Self {
        selected.sort_unstable();
        selected.dedup();
        let mut acc = RowSet::empty(a.row_count());
        for &j in &selected {
            acc.union_with(a.column(j));
        }
        let covered: Vec<bool> = (0..a.row_count()).map(|i| acc.contains(i)).collect();
        Self {
            num_covered: acc.count(),
            num_cameras: selected.len(),
            selected,
            covered,
            optimal,
            tie_class_size: ties,
        }
    }

    pub fn covered_vector(&self) -> Vec<u8> {
        self.covered.iter().map(|&c| u8::from(c)).collect()
    }
}

/// Representative columns after removing duplicates and dominated columns,
/// as ascending original indices. Empty columns are dropped too.
pub fn dominance_reduce(a: &BinaryCoverageMatrix) -> Vec<usize> {
    let mut first_of: HashMap<&RowSet, usize> = HashMap::new();
    for (j, s) in a.column_sets().iter().enumerate() {
        if !s.is_empty() {
            first_of.entry(s).or_insert(j);
        }
    }
    let mut distinct: Vec<(usize, usize)> = first_of
        .values()
        .map(|&j| (a.column(j).count(), j))
        .collect();
    // larger sets first so a candidate only needs checking against kept sets
    distinct.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    let mut kept: Vec<usize> = Vec::new();
    for &(size, j) in &distinct {
        let s = a.column(j);
        let dominated = kept
            .iter()
            .any(|&k| a.column(k).count() > size && s.is_subset(a.column(k)));
        if !dominated {
            kept.push(j);
        }
    }
    kept.sort_unstable();
    kept
}

fn infeasible(a: &BinaryCoverageMatrix) -> Option<OptimizeError> {
    let rows = a.uncoverable_rows();
    (!rows.is_empty()).then(|| OptimizeError::Infeasible {
        rows: rows.into_iter().map(|i| a.rows()[i]).collect(),
    })
}

/// Shared node counter with a hard cap.
struct Budget {
    used: AtomicU64,
    cap: u64,
    aborted: AtomicBool,
}

impl Budget {
    fn new(cap: u64) -> Self {
        Self {
            used: AtomicU64::new(0),
            cap,
            aborted: AtomicBool::new(false),
        }
    }

    fn aborted(&self) -> bool {
        self.aborted.load(Ordering::Relaxed)
    }
}

/// Per-thread node tally, flushed to the shared budget in batches.
struct Tally<'a> {
    budget: &'a Budget,
    local: u64,
}

impl<'a> Tally<'a> {
    const BATCH: u64 = 4096;

    fn new(budget: &'a Budget) -> Self {
        Self { budget, local: 0 }
    }

    /// Counts one node; false once the cap is exhausted.
    fn tick(&mut self) -> bool {
        self.local += 1;
        if self.local >= Self::BATCH {
            self.flush();
        }
        !self.budget.aborted()
    }

    fn flush(&mut self) {
        let total = self.budget.used.fetch_add(self.local, Ordering::Relaxed) + self.local;
        self.local = 0;
        if total > self.budget.cap {
            self.budget.aborted.store(true, Ordering::Relaxed);
        }
    }
}

impl Drop for Tally<'_> {
    fn drop(&mut self) {
        self.flush();
    }
}

/// Best selection found in one part of a search.
#[derive(Clone, Debug, Default)]
struct Found {
    best: Option<Vec<u32>>,
    score: usize,
    ties: u64,
}

impl Found {
    fn merge_lex(mut self, other: Found) -> Found {
        self.ties += other.ties;
        self.best = match (self.best, other.best) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }
}

struct CoverSearch<'a> {
    sets: Vec<&'a RowSet>,
    /// Representative columns covering each row, ascending.
    covering: Vec<Vec<u32>>,
}

impl<'a> CoverSearch<'a> {
    fn new(sets: Vec<&'a RowSet>, rows: usize) -> Self {
        let mut covering = vec![Vec::new(); rows];
        for (c, s) in sets.iter().enumerate() {
            for r in s.iter() {
                covering[r].push(c as u32);
            }
        }
        Self { sets, covering }
    }

    /// Uncovered row with the fewest usable columns, and those columns.
    fn branch_row(&self, uncovered: &RowSet, forbidden: &[bool]) -> Vec<u32> {
        let mut best: Option<Vec<u32>> = None;
        for r in uncovered.iter() {
            let cands: Vec<u32> = self.covering[r]
                .iter()
                .copied()
                .filter(|&c| !forbidden[c as usize])
                .collect();
            if best.as_ref().is_none_or(|b| cands.len() < b.len()) {
                let empty = cands.is_empty();
                best = Some(cands);
                if empty {
                    break;
                }
            }
        }
        best.unwrap_or_default()
    }

    fn lower_bound_exceeds(&self, uncovered: &RowSet, forbidden: &[bool], left: usize) -> bool {
        let need = uncovered.count();
        let max_gain = self
            .sets
            .iter()
            .enumerate()
            .filter(|(c, _)| !forbidden[*c])
            .map(|(_, s)| s.intersection_count(uncovered))
            .max()
            .unwrap_or(0);
        max_gain == 0 || need.div_ceil(max_gain) > left
    }

    fn dfs(
        &self,
        uncovered: &RowSet,
        left: usize,
        chosen: &mut Vec<u32>,
        forbidden: &mut [bool],
        found: &mut Found,
        tally: &mut Tally,
    ) {
        if uncovered.is_empty() {
            let mut sel = chosen.clone();
            sel.sort_unstable();
            found.ties += 1;
            if found.best.as_ref().is_none_or(|b| sel < *b) {
                found.best = Some(sel);
            }
            return;
        }
        if left == 0 || !tally.tick() {
            return;
        }
        if self.lower_bound_exceeds(uncovered, forbidden, left) {
            return;
        }
        let cands = self.branch_row(uncovered, forbidden);
        self.branch(uncovered, left, &cands, chosen, forbidden, found, tally);
    }

    #[allow(clippy::too_many_arguments)]
    fn branch(
        &self,
        uncovered: &RowSet,
        left: usize,
        cands: &[u32],
        chosen: &mut Vec<u32>,
        forbidden: &mut [bool],
        found: &mut Found,
        tally: &mut Tally,
    ) {
        for &c in cands {
            let mut next = uncovered.clone();
            next.difference_with(self.sets[c as usize]);
            chosen.push(c);
            self.dfs(&next, left - 1, chosen, forbidden, found, tally);
            chosen.pop();
            // later siblings must not reuse c, so each cover is seen once
            forbidden[c as usize] = true;
        }
        for &c in cands {
            forbidden[c as usize] = false;
        }
    }

    /// All covers with exactly `k` columns; the root is split across threads.
    fn covers_of_size(&self, full: &RowSet, k: usize, exec: Execution, budget: &Budget) -> Found {
        let n = self.sets.len();
        let root = self.branch_row(full, &vec![false; n]);
        let parts = map_range(exec, root.len(), |i| {
            let mut tally = Tally::new(budget);
            let mut forbidden = vec![false; n];
            for &c in &root[..i] {
                forbidden[c as usize] = true;
            }
            let c = root[i];
            let mut next = full.clone();
            next.difference_with(self.sets[c as usize]);
            let mut chosen = vec![c];
            let mut found = Found::default();
            self.dfs(
                &next,
                k - 1,
                &mut chosen,
                &mut forbidden,
                &mut found,
                &mut tally,
            );
            found
        });
        parts.into_iter().fold(Found::default(), Found::merge_lex)
    }
}

fn greedy_sets(sets: &[&RowSet], rows: usize) -> Vec<usize> {
    let mut uncovered = RowSet::full(rows);
    let mut picked = Vec::new();
    while !uncovered.is_empty() {
        let mut best = (0usize, usize::MAX);
        for (j, s) in sets.iter().enumerate() {
            let g = s.intersection_count(&uncovered);
            if g > best.0 {
                best = (g, j);
            }
        }
        if best.0 == 0 {
            break;
        }
        picked.push(best.1);
        uncovered.difference_with(sets[best.1]);
    }
    picked
}

/// Minimum number of columns covering every row.
pub fn min_cover_exact(
    a: &BinaryCoverageMatrix,
    opts: &SolverOptions,
) -> Result<PlacementSolution, OptimizeError> {
    let rows = a.row_count();
    if rows == 0 {
        return Ok(PlacementSolution::from_selection(a, Vec::new(), true, 1));
    }
    if let Some(e) = infeasible(a) {
        return Err(e);
    }
    let reps = dominance_reduce(a);
    let sets: Vec<&RowSet> = reps.iter().map(|&j| a.column(j)).collect();
    let upper = greedy_sets(&sets, rows).len();
    let largest = sets.iter().map(|s| s.count()).max().unwrap_or(1);
    let lower = rows.div_ceil(largest).max(1);
    let search = CoverSearch::new(sets, rows);
    let full = RowSet::full(rows);
    let budget = Budget::new(opts.max_evaluations);
    for k in lower..=upper {
        let found = search.covers_of_size(&full, k, opts.execution, &budget);
        if budget.aborted() {
            return Err(OptimizeError::EvaluationCap {
                cap: opts.max_evaluations,
            });
        }
        if let Some(best) = found.best {
            let selected = best.iter().map(|&c| reps[c as usize]).collect();
            return Ok(PlacementSolution::from_selection(
                a, selected, true, found.ties,
            ));
        }
    }
    unreachable!("greedy cover of size {upper} exists")
}

/// Greedy cover: repeatedly take the column covering the most uncovered
/// rows, lowest index on ties.
pub fn min_cover_greedy(a: &BinaryCoverageMatrix) -> Result<PlacementSolution, OptimizeError> {
    if let Some(e) = infeasible(a) {
        return Err(e);
    }
    let sets: Vec<&RowSet> = a.column_sets().iter().collect();
    let picked = greedy_sets(&sets, a.row_count());
    Ok(PlacementSolution::from_selection(a, picked, false, 1))
}

struct BudgetSearch<'a> {
    sets: Vec<&'a RowSet>,
    k: usize,
    /// `suffix_max[j]` = largest set size among columns `j..`.
    suffix_max: Vec<usize>,
    global_best: AtomicUsize,
}

impl BudgetSearch<'_> {
    fn dfs(
        &self,
        start: usize,
        acc: &RowSet,
        chosen: &mut Vec<u32>,
        found: &mut Found,
        tally: &mut Tally,
    ) {
        let n = self.sets.len();
        let depth = chosen.len();
        let have = acc.count();
        if depth == self.k {
            if found.best.is_none() || have > found.score {
                found.best = Some(chosen.clone());
                found.score = have;
                found.ties = 1;
                self.global_best.fetch_max(have, Ordering::Relaxed);
            } else if have == found.score {
                found.ties += 1;
            }
            return;
        }
        if !tally.tick() {
            return;
        }
        let remaining = self.k - depth;
        let last_start = n - remaining;
        let floor = self.global_best.load(Ordering::Relaxed);
        if have + remaining * self.suffix_max[start] < floor {
            return;
        }
        if remaining >= 2 {
            let gain = self.sets[start..]
                .iter()
                .map(|s| s.count() - s.intersection_count(acc))
                .max()
                .unwrap_or(0);
            if have + remaining * gain < floor {
                return;
            }
        }
        for j in start..=last_start {
            let mut next = acc.clone();
            next.union_with(self.sets[j]);
            chosen.push(j as u32);
            self.dfs(j + 1, &next, chosen, found, tally);
            chosen.pop();
            if tally.budget.aborted() {
                return;
            }
        }
    }
}

/// Exactly `k` columns maximizing the number of covered rows. A row counts
/// as covered when at least one selected column has a 1 in it.
pub fn max_coverage_budget(
    a: &BinaryCoverageMatrix,
    k: usize,
    opts: &SolverOptions,
) -> Result<PlacementSolution, OptimizeError> {
    let m = a.column_count();
    if k > m {
        return Err(OptimizeError::BudgetTooLarge { k, m });
    }
    if k == 0 {
        return Ok(PlacementSolution::from_selection(a, Vec::new(), true, 1));
    }
    let reps = dominance_reduce(a);
    let kk = k.min(reps.len());
    let mut selected: Vec<usize> = Vec::new();
    let mut ties = 1;
    if kk > 0 {
        let sets: Vec<&RowSet> = reps.iter().map(|&j| a.column(j)).collect();
        let mut suffix_max = vec![0; sets.len() + 1];
        for j in (0..sets.len()).rev() {
            suffix_max[j] = suffix_max[j + 1].max(sets[j].count());
        }
        let search = BudgetSearch {
            sets,
            k: kk,
            suffix_max,
            global_best: AtomicUsize::new(0),
        };
        let budget = Budget::new(opts.max_evaluations);
        let rows = a.row_count();
        let firsts = reps.len() - kk + 1;
        let parts = map_range(opts.execution, firsts, |first| {
            let mut tally = Tally::new(&budget);
            let mut acc = RowSet::empty(rows);
            acc.union_with(search.sets[first]);
            let mut chosen = vec![first as u32];
            let mut found = Found::default();
            search.dfs(first + 1, &acc, &mut chosen, &mut found, &mut tally);
            found
        });
        if budget.aborted() {
            return Err(OptimizeError::EvaluationCap {
                cap: opts.max_evaluations,
            });
        }
        let top = parts
            .iter()
            .filter(|p| p.best.is_some())
            .map(|p| p.score)
            .max()
            .unwrap_or(0);
        let winner = parts
            .into_iter()
            .filter(|p| p.best.is_some() && p.score == top)
            .fold(Found::default(), Found::merge_lex);
        ties = winner.ties;
        selected = winner
            .best
            .expect("at least one combination evaluated")
            .iter()
            .map(|&c| reps[c as usize])
            .collect();
    }
    // pad with the lowest unused columns; they cannot add coverage
    let mut j = 0;
    while selected.len() < k {
        if !selected.contains(&j) {
            selected.push(j);
        }
        j += 1;
    }
    Ok(PlacementSolution::from_selection(a, selected, true, ties))
}

/// Per-row attribution of a selection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageReportRow {
    pub row: usize,
    #[serde(flatten)]
    pub label: RowLabel,
    pub covered: bool,
    /// Selected column indices that see this row.
    pub covering: Vec<usize>,
}

/// Coverage attribution for every row; uncovered rows come first.
pub fn explain(a: &BinaryCoverageMatrix, sol: &PlacementSolution) -> Vec<CoverageReportRow> {
    let mut out: Vec<CoverageReportRow> = a
        .rows()
        .iter()
        .enumerate()
        .map(|(row, &label)| {
            let covering: Vec<usize> = sol
                .selected
                .iter()
                .copied()
                .filter(|&j| a.column(j).contains(row))
                .collect();
            CoverageReportRow {
                row,
                label,
                covered: !covering.is_empty(),
                covering,
            }
        })
        .collect();
    out.sort_by_key(|r| (r.covered, r.row));
    out
}
