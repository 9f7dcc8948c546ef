//! Existence search by block juxtaposition: a strength-(t+1) array on k+1
//! columns exists iff v strength-t arrays on k columns can be stacked so
//! that the stack has strength t+1, with a constant-per-block column
//! appended. The search fixes the first block and runs every remaining
//! block through all of its column permutations and per-column relabelings,
//! column by column, with an incremental strength-(t+1) check after each
//! fully placed column.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Duration;

use rayon::prelude::*;

use crate::array::{CoveringArray, Params};
use crate::canonical::{canonical_minimum, CanonicalForm, LexVector};
use crate::coverage::{combinations, TupleCoverage};
use crate::error::{CaError, Result};
use crate::generator::{Budget, CaLibrary, RunControl};
use crate::multiset::valid_multisets;

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub workers: usize,
    pub budget: Budget,
    /// Incremental strength check after each fully placed column. Disabling
    /// it explores every juxtaposition; the emitted set must not change
    /// (exercised by the differential tests).
    pub coverage_guard: bool,
    /// For equal block sizes, visit only tuples with nondecreasing library
    /// indices; swapping equal-size blocks yields an isomorphic result.
    pub restrict_equal_tuples: bool,
    pub control: Option<Arc<RunControl>>,
}

impl Default for SearchOptions {
    fn default() -> SearchOptions {
        SearchOptions {
            workers: 1,
            budget: Budget::default(),
            coverage_guard: true,
            restrict_equal_tuples: true,
            control: None,
        }
    }
}

/// Counters for one block-size multiset of a search, for runtime
/// forensics.
#[derive(Debug, Clone, Default)]
pub struct MultisetStats {
    pub sizes: Vec<usize>,
    pub tuples: u64,
    pub completed_juxtapositions: u64,
    pub coverage_prunes: u64,
}

#[derive(Debug, Clone, Default)]
pub struct SearchStats {
    /// column placements attempted
    pub nodes: u64,
    /// juxtapositions that passed every incremental check through the last
    /// column
    pub completed_juxtapositions: u64,
    /// placements rejected by the incremental strength check
    pub coverage_prunes: u64,
    pub multisets: usize,
    pub tuples: u64,
    pub wall: Duration,
    /// one entry per valid multiset considered
    pub per_multiset: Vec<MultisetStats>,
}

impl SearchStats {
    fn absorb(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.completed_juxtapositions += other.completed_juxtapositions;
        self.coverage_prunes += other.coverage_prunes;
        self.tuples += other.tuples;
    }
}

/// All distinct strength-(t+1) arrays found, sorted by lex vector, plus the
/// search counters. An empty member list over complete libraries is a proof
/// of nonexistence.
#[derive(Debug)]
pub struct SearchResultSet {
    pub members: Vec<CanonicalForm>,
    pub stats: SearchStats,
}

/// One juxtaposition search over a fixed tuple of blocks. Block 0 rows stay
/// as-is; for each free block the columns of its source array are placed in
/// every order with every relabeling.
struct JuxtapositionState<'a> {
    rows: usize,
    k: usize,
    v: usize,
    /// strength of the blocks; the stack is checked at strength + 1
    strength: usize,
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    /// source columns per block
    sources: Vec<Vec<Vec<u8>>>,
    /// the partial stack, column-major over all rows
    j_cols: Vec<Vec<u8>>,
    /// assigned[i][j]: column j of source i currently placed
    assigned: Vec<Vec<bool>>,
    relabelings: Vec<Vec<u8>>,
    guard: bool,
    /// (t+1)-subsets of {0..r} containing r, keyed by r, minus the column r
    /// itself
    guard_combos: Vec<Vec<Vec<usize>>>,
    tuple_count: usize,
    scratch: TupleCoverage,
    stats: SearchStats,
    control: &'a RunControl,
    pending_nodes: u32,
    stopped: bool,
}

const CHARGE_BATCH: u32 = 4096;

impl<'a> JuxtapositionState<'a> {
    fn new(
        tuple: &[&CoveringArray],
        guard: bool,
        control: &'a RunControl,
    ) -> Result<JuxtapositionState<'a>> {
        let first = tuple
            .first()
            .ok_or_else(|| CaError::invalid("juxtaposition of zero blocks"))?;
        let k = first.columns();
        let v = first.order();
        let t = first.strength();
        if tuple.len() != v {
            return Err(CaError::invalid(format!(
                "expected {v} blocks, got {}",
                tuple.len()
            )));
        }
        if v > 8 {
            return Err(CaError::Infeasible(
                "relabeling enumeration beyond order 8 is not supported".into(),
            ));
        }
        for a in tuple {
            if a.columns() != k || a.order() != v || a.strength() != t {
                return Err(CaError::invalid(
                    "juxtaposition blocks must share strength, columns, and order",
                ));
            }
        }
        let sizes: Vec<usize> = tuple.iter().map(|a| a.rows()).collect();
        let rows: usize = sizes.iter().sum();
        let mut offsets = Vec::with_capacity(v);
        let mut acc = 0usize;
        for &s in &sizes {
            offsets.push(acc);
            acc += s;
        }
        let tuple_count = Params::tuple_count(v, t + 1)?;

        let mut j_cols = vec![vec![0u8; rows]; k];
        // block 0 is fixed up front
        for (c, col) in j_cols.iter_mut().enumerate() {
            for (r, cell) in col[..sizes[0]].iter_mut().enumerate() {
                *cell = tuple[0].cell(r, c);
            }
        }
        let guard_combos = (0..k).map(|r| combinations(r, t)).collect();
        let mut relabelings = Vec::new();
        crate::array::for_each_permutation(v, |p| relabelings.push(p.to_vec()));

        Ok(JuxtapositionState {
            rows,
            k,
            v,
            strength: t,
            sizes,
            offsets,
            sources: tuple.iter().map(|a| a.to_columns()).collect(),
            j_cols,
            assigned: vec![vec![false; k]; v],
            relabelings,
            guard,
            guard_combos,
            tuple_count,
            scratch: TupleCoverage::new(tuple_count),
            stats: SearchStats::default(),
            control,
            pending_nodes: 0,
            stopped: false,
        })
    }

    fn charge(&mut self) {
        self.pending_nodes += 1;
        if self.pending_nodes >= CHARGE_BATCH {
            if !self.control.try_charge(self.pending_nodes as u64) {
                self.stopped = true;
            }
            self.pending_nodes = 0;
        }
    }

    fn flush_charges(&mut self) {
        if self.pending_nodes > 0 {
            self.control.try_charge(self.pending_nodes as u64);
            self.pending_nodes = 0;
        }
    }

    /// Incremental check: every (t+1)-subset of columns {0..r} that includes
    /// column r covers all tuples over the full stack. Subsets not touching
    /// r were certified when their own last column was placed.
    fn stack_covers_through(&mut self, r: usize) -> bool {
        let v = self.v;
        for others in &self.guard_combos[r] {
            self.scratch.clear();
            let last = &self.j_cols[r];
            for (row, &sym) in last.iter().enumerate() {
                let mut rank = 0usize;
                for &c in others {
                    rank = rank * v + self.j_cols[c][row] as usize;
                }
                rank = rank * v + sym as usize;
                self.scratch.mark(rank);
                if self.scratch.covered() == self.tuple_count {
                    break;
                }
            }
            if self.scratch.covered() != self.tuple_count {
                return false;
            }
        }
        true
    }

    /// Place relabeling `eps` of source column `j` of block `i` as column
    /// `r`, then continue per the fill order: next block at the same column,
    /// or the guard plus descent to the next column once every block placed.
    fn place_and_descend(
        &mut self,
        i: usize,
        r: usize,
        j: usize,
        eps: usize,
        emit: &mut dyn FnMut(&CoveringArray, CanonicalForm),
    ) {
        self.charge();
        if self.stopped {
            return;
        }
        self.stats.nodes += 1;
        let off = self.offsets[i];
        let size = self.sizes[i];
        {
            let eps = &self.relabelings[eps];
            let src = &self.sources[i][j];
            let dst = &mut self.j_cols[r][off..off + size];
            for (d, &s) in dst.iter_mut().zip(src.iter()) {
                *d = eps[s as usize];
            }
        }
        if i == self.v - 1 {
            let pass = r < self.strength || !self.guard || self.stack_covers_through(r);
            if !pass {
                self.stats.coverage_prunes += 1;
                return;
            }
            if r == self.k - 1 {
                self.stats.completed_juxtapositions += 1;
                // with the guard on, the stack is already certified strength
                // t+1 column by column
                if self.guard || self.full_stack_covers() {
                    self.emit_completed(emit);
                }
                return;
            }
            self.extend_column(1, r + 1, emit);
        } else {
            self.extend_column(i + 1, r, emit);
        }
    }

    /// With the guard disabled every juxtaposition is completed; emit only
    /// the ones that really form a strength-(t+1) stack.
    fn full_stack_covers(&mut self) -> bool {
        (self.strength..self.k).all(|r| self.stack_covers_through(r))
    }

    fn emit_completed(&mut self, emit: &mut dyn FnMut(&CoveringArray, CanonicalForm)) {
        let params = Params::new(self.rows, self.strength + 1, self.k + 1, self.v)
            .expect("juxtaposition params");
        let mut cells = Vec::with_capacity(self.rows * (self.k + 1));
        let mut block = 0usize;
        let mut block_end = self.sizes[0];
        for row in 0..self.rows {
            while row >= block_end {
                block += 1;
                block_end += self.sizes[block];
            }
            for col in &self.j_cols {
                cells.push(col[row]);
            }
            cells.push(block as u8);
        }
        let completed = CoveringArray::new(params, cells).expect("juxtaposition cells");
        let minimum = canonical_minimum(&completed);
        emit(&completed, minimum);
    }

    /// Try every unassigned source column of block `i`, under every
    /// relabeling (identity first, then lexicographic), as column `r`.
    fn extend_column(
        &mut self,
        i: usize,
        r: usize,
        emit: &mut dyn FnMut(&CoveringArray, CanonicalForm),
    ) {
        for j in 0..self.k {
            if self.assigned[i][j] {
                continue;
            }
            self.assigned[i][j] = true;
            for eps in 0..self.relabelings.len() {
                self.place_and_descend(i, r, j, eps, emit);
                if self.stopped {
                    self.assigned[i][j] = false;
                    return;
                }
            }
            self.assigned[i][j] = false;
        }
    }
}

/// Statistics of a single-tuple juxtaposition run.
pub type JuxtaposeStats = SearchStats;

/// Explore every juxtaposition of `tuple` (block 0 fixed, the others under
/// all column permutations and relabelings); for each stack that passes the
/// incremental strength-(t+1) checks, append the block-index column and hand
/// the completed array plus its class minimum to `emit`.
pub fn generate_juxtapositions(
    tuple: &[&CoveringArray],
    options: &SearchOptions,
    emit: &mut dyn FnMut(&CoveringArray, CanonicalForm),
) -> Result<JuxtaposeStats> {
    let control = options
        .control
        .clone()
        .unwrap_or_else(|| RunControl::new(options.budget));
    let mut state = JuxtapositionState::new(tuple, options.coverage_guard, &control)?;
    state.extend_column(1, 0, emit);
    state.flush_charges();
    if control.is_cancelled() {
        return Err(CaError::BudgetExhausted {
            nodes: control.nodes(),
            results: control.results() as usize,
            elapsed_ms: control.elapsed().as_millis() as u64,
        });
    }
    let mut stats = state.stats;
    stats.tuples = 1;
    stats.wall = control.elapsed();
    stats.per_multiset = vec![MultisetStats {
        sizes: tuple.iter().map(|a| a.rows()).collect(),
        tuples: 1,
        completed_juxtapositions: stats.completed_juxtapositions,
        coverage_prunes: stats.coverage_prunes,
    }];
    Ok(stats)
}

type UnitOutcome = (Vec<(LexVector, CanonicalForm)>, SearchStats);

/// One unit of parallel work: a tuple and one first-level placement
/// (source column + relabeling for column 0 of block 1).
#[derive(Debug, Clone)]
struct WorkUnit {
    multiset: usize,
    member_indices: Vec<usize>,
    first_column: usize,
    first_relabeling: usize,
}

/// Decide existence of CA(N; t', k', v) by juxtaposing members of the
/// supplied strength-(t'-1) libraries over every valid multiset. Libraries
/// are keyed by row count and must be present and complete for every size
/// any multiset uses; an empty result set is then a proof of nonexistence.
pub fn construct(
    total_rows: usize,
    target_strength: usize,
    target_columns: usize,
    order: usize,
    libraries: &BTreeMap<usize, CaLibrary>,
    options: &SearchOptions,
) -> Result<SearchResultSet> {
    if target_strength < 2 || target_columns < 2 {
        return Err(CaError::invalid(
            "target strength and column count must both be at least 2",
        ));
    }
    if target_columns > 64 {
        return Err(CaError::Infeasible(
            "canonical search supports at most 64 columns".into(),
        ));
    }
    let t = target_strength - 1;
    let k = target_columns - 1;
    if t > k {
        return Err(CaError::invalid("target strength exceeds target columns"));
    }
    let control = options
        .control
        .clone()
        .unwrap_or_else(|| RunControl::new(options.budget));

    let multisets = valid_multisets(total_rows, t, k, order);
    let mut stats = SearchStats {
        multisets: multisets.len(),
        per_multiset: multisets
            .iter()
            .map(|ms| MultisetStats {
                sizes: ms.sizes().to_vec(),
                ..MultisetStats::default()
            })
            .collect(),
        ..SearchStats::default()
    };
    if multisets.is_empty() {
        stats.wall = control.elapsed();
        return Ok(SearchResultSet {
            members: Vec::new(),
            stats,
        });
    }

    // Every size used by any multiset needs a library with matching
    // parameters.
    let mut missing = Vec::new();
    for ms in &multisets {
        for &size in ms.sizes() {
            match libraries.get(&size) {
                None => {
                    if !missing.contains(&size) {
                        missing.push(size);
                    }
                }
                Some(lib) => {
                    let p = lib.params();
                    if p.rows() != size
                        || p.strength() != t
                        || p.columns() != k
                        || p.order() != order
                    {
                        return Err(CaError::invalid(format!(
                            "library for {size} rows has parameters ({}, {}, {}, {}), expected ({size}, {t}, {k}, {order})",
                            p.rows(), p.strength(), p.columns(), p.order(),
                        )));
                    }
                }
            }
        }
    }
    if !missing.is_empty() {
        missing.sort_unstable();
        return Err(CaError::MissingLibraries { missing });
    }

    if order > 8 {
        return Err(CaError::Infeasible(
            "relabeling enumeration beyond order 8 is not supported".into(),
        ));
    }

    // Enumerate tuples, splitting each into first-level work units.
    let relabeling_count: usize = (1..=order).product();
    let mut units = Vec::new();
    let mut tuples = 0u64;
    for (mi, ms) in multisets.iter().enumerate() {
        let sizes = ms.sizes();
        if sizes.iter().any(|s| libraries[s].is_empty()) {
            continue;
        }
        let mut indices = vec![0usize; sizes.len()];
        'tuples: loop {
            let admissible = !options.restrict_equal_tuples
                || (1..sizes.len())
                    .all(|b| sizes[b] != sizes[b - 1] || indices[b - 1] <= indices[b]);
            if admissible {
                tuples += 1;
                stats.per_multiset[mi].tuples += 1;
                for first_column in 0..k {
                    for first_relabeling in 0..relabeling_count {
                        units.push(WorkUnit {
                            multiset: mi,
                            member_indices: indices.clone(),
                            first_column,
                            first_relabeling,
                        });
                    }
                }
            }
            // advance odometer, last block fastest
            let mut b = sizes.len();
            loop {
                if b == 0 {
                    break 'tuples;
                }
                b -= 1;
                indices[b] += 1;
                if indices[b] < libraries[&sizes[b]].len() {
                    break;
                }
                indices[b] = 0;
            }
        }
    }
    stats.tuples = tuples;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers.max(1))
        .build()
        .map_err(|e| CaError::Infeasible(format!("worker pool: {e}")))?;

    let per_unit: Vec<Result<UnitOutcome>> = pool.install(|| {
        units
            .par_iter()
            .map(|unit| {
                let ms = &multisets[unit.multiset];
                let tuple: Vec<&CoveringArray> = unit
                    .member_indices
                    .iter()
                    .enumerate()
                    .map(|(b, &idx)| libraries[&ms.sizes()[b]].members()[idx].array())
                    .collect();
                let mut state = JuxtapositionState::new(&tuple, options.coverage_guard, &control)?;
                let mut found = Vec::new();
                let mut emit = |_raw: &CoveringArray, min: CanonicalForm| {
                    found.push((min.lex().clone(), min));
                };
                state.assigned[1][unit.first_column] = true;
                state.place_and_descend(1, 0, unit.first_column, unit.first_relabeling, &mut emit);
                state.assigned[1][unit.first_column] = false;
                state.flush_charges();
                Ok((found, state.stats))
            })
            .collect()
    });

    let mut members = BTreeMap::new();
    for (unit, outcome) in units.iter().zip(per_unit) {
        let (found, unit_stats) = outcome?;
        stats.absorb(&unit_stats);
        let per = &mut stats.per_multiset[unit.multiset];
        per.completed_juxtapositions += unit_stats.completed_juxtapositions;
        per.coverage_prunes += unit_stats.coverage_prunes;
        for (lex, min) in found {
            members.entry(lex).or_insert(min);
        }
    }
    if control.is_cancelled() {
        return Err(CaError::BudgetExhausted {
            nodes: control.nodes(),
            results: members.len(),
            elapsed_ms: control.elapsed().as_millis() as u64,
        });
    }
    stats.wall = control.elapsed();
    Ok(SearchResultSet {
        members: members.into_values().collect(),
        stats,
    })
}

/// Largest column count for which the existence probe answers yes, starting
/// from `strength` columns and increasing; `None` when even `strength`
/// columns fail. The probe decides CA(N; t, k, v) existence for the caller's
/// fixed N, t, v.
pub fn cak(strength: usize, mut probe: impl FnMut(usize) -> Result<bool>) -> Result<Option<usize>> {
    if !probe(strength)? {
        return Ok(None);
    }
    let mut k = strength;
    loop {
        if !probe(k + 1)? {
            return Ok(Some(k));
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::verify_strength;
    use crate::generator::{brute_force_distinct, generate_distinct, GenOptions};

    fn params(n: usize, t: usize, k: usize, v: usize) -> Params {
        Params::new(n, t, k, v).unwrap()
    }

    fn library(n: usize, t: usize, k: usize, v: usize) -> CaLibrary {
        generate_distinct(params(n, t, k, v), &GenOptions::default())
            .unwrap()
            .library
    }

    #[test]
    fn juxtaposing_strength_one_blocks_builds_pairwise_arrays() {
        // the single distinct CA(2;1,2,2) juxtaposed with itself gives all
        // distinct CA(4;2,3,2)
        let lib = library(2, 1, 2, 2);
        assert_eq!(lib.len(), 1);
        let a = lib.members()[0].array();
        let mut found = Vec::new();
        let mut emit = |_: &CoveringArray, min: CanonicalForm| found.push(min);
        generate_juxtapositions(&[a, a], &SearchOptions::default(), &mut emit).unwrap();
        let mut lexes: Vec<_> = found.iter().map(|m| m.lex().clone()).collect();
        lexes.sort();
        lexes.dedup();

        let brute = brute_force_distinct(params(4, 2, 3, 2)).unwrap();
        let want: Vec<_> = brute.iter().map(|m| m.lex().clone()).collect();
        assert_eq!(lexes, want);
    }

    #[test]
    fn leaf_count_without_guard_matches_group_order() {
        // v=2, k=2: 2! column orders x (2!)^2 relabelings = 8 leaves
        let lib = library(2, 1, 2, 2);
        let a = lib.members()[0].array();
        let opts = SearchOptions {
            coverage_guard: false,
            ..SearchOptions::default()
        };
        let mut emit = |_: &CoveringArray, _: CanonicalForm| {};
        let stats = generate_juxtapositions(&[a, a], &opts, &mut emit).unwrap();
        assert_eq!(stats.completed_juxtapositions, 8);
        // placements per column: (k - r) unassigned sources times v!
        // relabelings, so 2*2 at column 0 plus 8 leaves
        assert_eq!(stats.nodes, 12);
    }

    /// Is `image` obtainable from `a` by a column permutation plus one
    /// relabeling per column (no row moves)? Exhaustive over k! (v!)^k.
    fn is_column_symbol_image(a: &CoveringArray, image: &CoveringArray) -> bool {
        let k = a.columns();
        let v = a.order();
        let perms = crate::array::SymbolPermutation::all(v);
        let mut col_orders = Vec::new();
        crate::array::for_each_permutation(k, |p| col_orders.push(p.to_vec()));
        let source_cols = a.to_columns();
        let image_cols = image.to_columns();
        col_orders.iter().any(|order| {
            (0..k).all(|r| {
                let src = &source_cols[order[r] as usize];
                perms.iter().any(|eps| {
                    src.iter()
                        .map(|&s| eps.apply(s))
                        .eq(image_cols[r].iter().copied())
                })
            })
        })
    }

    #[test]
    fn raw_emissions_have_block_structure() {
        // every completed stack keeps block 0 verbatim, carries the
        // constant-per-block final column, and each free block is a
        // column/symbol image of its tuple entry
        let lib = library(2, 1, 2, 2);
        let a = lib.members()[0].array();
        let mut raws = Vec::new();
        let mut emit = |raw: &CoveringArray, _: CanonicalForm| raws.push(raw.clone());
        generate_juxtapositions(&[a, a], &SearchOptions::default(), &mut emit).unwrap();
        assert!(!raws.is_empty());
        for raw in &raws {
            assert!(verify_strength(raw, 2).unwrap());
            assert_eq!(raw.column(raw.columns() - 1), vec![0, 0, 1, 1]);
            let split = crate::array::split_by_last_column(raw);
            assert_eq!(split.sizes(), &[2, 2]);
            let block0 = split.block(0).unwrap();
            assert_eq!(block0.cells(), a.cells());
            let block1 = split.block(1).unwrap();
            assert!(is_column_symbol_image(a, &block1));
        }
    }

    #[test]
    fn construct_strength_three_target() {
        // CA(8;3,4,2) exists (it is the optimum for four binary columns at
        // strength three) and decomposes over the single multiset {4,4}
        let mut libs = BTreeMap::new();
        libs.insert(4, library(4, 2, 3, 2));
        let result = construct(8, 3, 4, 2, &libs, &SearchOptions::default()).unwrap();
        assert!(!result.members.is_empty());
        for m in &result.members {
            assert!(verify_strength(m.array(), 3).unwrap());
        }
        assert_eq!(result.stats.multisets, 1);
    }

    #[test]
    fn guard_skipped_below_strength_boundary() {
        // with t = 1 blocks, the stack check applies from column index 1 on;
        // a single-column prefix is never the site of a prune
        let lib = library(2, 1, 2, 2);
        let a = lib.members()[0].array();
        let mut emit = |_: &CoveringArray, _: CanonicalForm| {};
        let stats = generate_juxtapositions(&[a, a], &SearchOptions::default(), &mut emit).unwrap();
        // upper bound from the symmetry reduction
        assert!(stats.completed_juxtapositions <= 8);
    }

    #[test]
    fn construct_tiny_existence() {
        let mut libs = BTreeMap::new();
        libs.insert(2, library(2, 1, 2, 2));
        let result = construct(4, 2, 3, 2, &libs, &SearchOptions::default()).unwrap();
        let brute = brute_force_distinct(params(4, 2, 3, 2)).unwrap();
        let got: Vec<_> = result.members.iter().map(|m| m.lex().clone()).collect();
        let want: Vec<_> = brute.iter().map(|m| m.lex().clone()).collect();
        assert_eq!(got, want);
        assert!(result.stats.completed_juxtapositions > 0);
    }

    #[test]
    fn construct_empty_multisets_is_immediate_nonexistence() {
        let libs = BTreeMap::new();
        let result = construct(7, 3, 4, 2, &libs, &SearchOptions::default()).unwrap();
        assert!(result.members.is_empty());
        assert_eq!(result.stats.multisets, 0);
        assert_eq!(result.stats.tuples, 0);
    }

    #[test]
    fn construct_requires_all_libraries() {
        let libs = BTreeMap::new();
        let err = construct(4, 2, 3, 2, &libs, &SearchOptions::default()).unwrap_err();
        match err {
            CaError::MissingLibraries { missing } => assert_eq!(missing, vec![2]),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn guard_and_tuple_restriction_do_not_change_members() {
        let mut libs = BTreeMap::new();
        libs.insert(2, library(2, 1, 3, 2));
        libs.insert(3, library(3, 1, 3, 2));
        let base = construct(5, 2, 4, 2, &libs, &SearchOptions::default()).unwrap();
        for (guard, restrict) in [(false, true), (true, false), (false, false)] {
            let opts = SearchOptions {
                coverage_guard: guard,
                restrict_equal_tuples: restrict,
                ..SearchOptions::default()
            };
            let alt = construct(5, 2, 4, 2, &libs, &opts).unwrap();
            let a: Vec<_> = base.members.iter().map(|m| m.lex().clone()).collect();
            let b: Vec<_> = alt.members.iter().map(|m| m.lex().clone()).collect();
            assert_eq!(a, b, "guard={guard} restrict={restrict}");
            if !guard {
                assert!(alt.stats.coverage_prunes == 0);
            }
        }
    }

    #[test]
    fn cak_for_four_rows_strength_two_binary() {
        let result = cak(2, |k| {
            let lib = brute_force_distinct(params(4, 2, k, 2))?;
            Ok(!lib.is_empty())
        })
        .unwrap();
        assert_eq!(result, Some(3));
    }
}
