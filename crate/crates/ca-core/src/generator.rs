//! Isomorph-free exhaustive generation: every covering array class minimum
//! for a parameter set, produced by an orderly column-major search, plus a
//! brute-force oracle for sizes small enough to enumerate outright.
//!
//! The search fills cells in column-major order, values ascending, and
//! prunes with (a) nondecreasing row and column prefixes, (b) per-column
//! symbol-count and tuple-coverage feasibility against the rows that remain,
//! and (c) an exact minimality test of the complete-column prefix whenever a
//! column finishes. The test at the last column is the full canonicity
//! check, so whatever survives it is emitted directly: one member per class,
//! in lex order, with no post-hoc deduplication.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::array::{CoveringArray, Params};
use crate::canonical::{canonical_minimum, exists_smaller_arrangement, CanonicalForm};
use crate::coverage::{combinations, verify_strength, TupleCoverage};
use crate::error::{CaError, Result};

/// The complete set of non-isomorphic covering arrays for one parameter
/// set: pairwise non-isomorphic class minima, sorted by lex vector.
#[derive(Debug, Clone)]
pub struct CaLibrary {
    params: Params,
    members: Vec<CanonicalForm>,
}

impl CaLibrary {
    /// Members must share `params` and be strictly increasing by lex vector
    /// (which also rules out duplicates).
    pub fn new(params: Params, members: Vec<CanonicalForm>) -> Result<CaLibrary> {
        for m in &members {
            if m.array().params() != params {
                return Err(CaError::invalid("library member has mismatched parameters"));
            }
        }
        for w in members.windows(2) {
            if w[0].lex() >= w[1].lex() {
                return Err(CaError::invalid(
                    "library members must be strictly increasing by lex vector",
                ));
            }
        }
        Ok(CaLibrary { params, members })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn members(&self) -> &[CanonicalForm] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &CanonicalForm> {
        self.members.iter()
    }
}

/// Explicit resource limits. Exceeding either is an error carrying partial
/// progress, never a silently truncated result.
#[derive(Debug, Clone, Copy, Default)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_wall: Option<Duration>,
}

/// Shared counters for budget enforcement, cancellation, and progress
/// reporting across worker threads.
#[derive(Debug)]
pub struct RunControl {
    nodes: AtomicU64,
    results: AtomicU64,
    cancelled: AtomicBool,
    started: Instant,
    max_nodes: u64,
    deadline: Option<Instant>,
}

impl RunControl {
    pub fn new(budget: Budget) -> Arc<RunControl> {
        let started = Instant::now();
        Arc::new(RunControl {
            nodes: AtomicU64::new(0),
            results: AtomicU64::new(0),
            cancelled: AtomicBool::new(false),
            started,
            max_nodes: budget.max_nodes.unwrap_or(u64::MAX),
            deadline: budget.max_wall.map(|w| started + w),
        })
    }

    pub fn nodes(&self) -> u64 {
        self.nodes.load(AtomicOrdering::Relaxed)
    }

    pub fn results(&self) -> u64 {
        self.results.load(AtomicOrdering::Relaxed)
    }

    pub fn elapsed(&self) -> Duration {
        self.started.elapsed()
    }

    pub fn cancel(&self) {
        self.cancelled.store(true, AtomicOrdering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.cancelled.load(AtomicOrdering::Relaxed)
    }

    /// Charge a batch of search nodes; false means stop now.
    pub(crate) fn try_charge(&self, batch: u64) -> bool {
        if self.is_cancelled() {
            return false;
        }
        let total = self.nodes.fetch_add(batch, AtomicOrdering::Relaxed) + batch;
        if total > self.max_nodes {
            self.cancel();
            return false;
        }
        if let Some(deadline) = self.deadline {
            if Instant::now() > deadline {
                self.cancel();
                return false;
            }
        }
        true
    }

    pub(crate) fn add_result(&self) {
        self.results.fetch_add(1, AtomicOrdering::Relaxed);
    }

    fn budget_error(&self) -> CaError {
        CaError::BudgetExhausted {
            nodes: self.nodes(),
            results: self.results() as usize,
            elapsed_ms: self.elapsed().as_millis() as u64,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GenOptions {
    pub workers: usize,
    pub budget: Budget,
    /// Complete columns after which the search tree is split into
    /// independent work units for the worker pool.
    pub split_columns: usize,
    /// Externally supplied control block (progress observation or shared
    /// cancellation); one is created from `budget` when absent.
    pub control: Option<Arc<RunControl>>,
}

impl Default for GenOptions {
    fn default() -> GenOptions {
        GenOptions {
            workers: 1,
            budget: Budget::default(),
            split_columns: 2,
            control: None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GenStats {
    pub nodes: u64,
    pub members: usize,
    pub elapsed: Duration,
}

#[derive(Debug)]
pub struct GenOutcome {
    pub library: CaLibrary,
    pub stats: GenStats,
}

const CHARGE_BATCH: u32 = 4096;

struct Layer {
    /// One entry per (t-1)-subset of the earlier columns; rank base per row
    /// is precomputed from the frozen earlier columns.
    subsets: Vec<SubsetCov>,
    /// rows i-1 and i agree on all earlier columns
    row_tied: Vec<bool>,
    sym_counts: Vec<u32>,
    deficit: usize,
    col_tied: bool,
    /// Comparison state of the filling column against each relabeling of
    /// itself (rows re-sorted inside closed tie groups): 0 while the image
    /// still matches, 1 once the image is lexicographically larger. An image
    /// that goes smaller kills the branch on the spot.
    eps_state: Vec<u8>,
    /// first row of the tie group currently open in the filling column
    group_start: usize,
}

struct SubsetCov {
    bases: Vec<u32>,
    cov: TupleCoverage,
}

struct GenState<'a> {
    rows: usize,
    k: usize,
    v: usize,
    t: usize,
    tuple_count: usize,
    required_per_symbol: usize,
    /// all v! symbol permutations when the order is small enough to
    /// enumerate; empty disables the relabeling prune
    relabelings: Vec<Vec<u8>>,
    cols: Vec<Vec<u8>>,
    layers: Vec<Layer>,
    undo: Vec<(u32, u32)>,
    control: &'a RunControl,
    pending_nodes: u32,
    stopped: bool,
    members: Vec<CanonicalForm>,
    /// When set, stop descending at this column and push the complete
    /// prefix here instead of searching further.
    frontier_at: Option<usize>,
    frontier: Vec<Vec<Vec<u8>>>,
}

impl<'a> GenState<'a> {
    fn new(params: Params, control: &'a RunControl) -> Result<GenState<'a>> {
        if params.columns() > 64 {
            return Err(CaError::Infeasible(
                "canonical search supports at most 64 columns".into(),
            ));
        }
        let tuple_count = Params::tuple_count(params.order(), params.strength())?;
        if tuple_count > 1 << 31 {
            return Err(CaError::Infeasible(format!(
                "{}^{} tuples per subset is beyond supported size",
                params.order(),
                params.strength()
            )));
        }
        let required_per_symbol = Params::tuple_count(params.order(), params.strength() - 1)?;
        let mut relabelings = Vec::new();
        if params.order() <= 8 {
            crate::array::for_each_permutation(params.order(), |p| relabelings.push(p.to_vec()));
        }
        Ok(GenState {
            rows: params.rows(),
            k: params.columns(),
            v: params.order(),
            t: params.strength(),
            tuple_count,
            required_per_symbol,
            relabelings,
            cols: vec![vec![0u8; params.rows()]; params.columns()],
            layers: Vec::new(),
            undo: Vec::new(),
            control,
            pending_nodes: 0,
            stopped: false,
            members: Vec::new(),
            frontier_at: None,
            frontier: Vec::new(),
        })
    }

    fn push_layer(&mut self, c: usize) {
        let n = self.rows;
        let mut row_tied = vec![true; n];
        for (m, tied) in row_tied.iter_mut().enumerate().skip(1) {
            *tied = (0..c).all(|j| self.cols[j][m] == self.cols[j][m - 1]);
        }
        let mut subsets = Vec::new();
        for others in combinations(c, self.t - 1) {
            let mut bases = vec![0u32; n];
            for (row, base) in bases.iter_mut().enumerate() {
                let mut r = 0u32;
                for &j in &others {
                    r = r * self.v as u32 + self.cols[j][row] as u32;
                }
                *base = r;
            }
            subsets.push(SubsetCov {
                bases,
                cov: TupleCoverage::new(self.tuple_count),
            });
        }
        self.layers.push(Layer {
            subsets,
            row_tied,
            sym_counts: vec![0; self.v],
            deficit: self.v * self.required_per_symbol,
            col_tied: c > 0,
            eps_state: vec![0; self.relabelings.len()],
            group_start: 0,
        });
    }

    fn pop_layer(&mut self) {
        self.layers.pop();
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

    /// Attempt to place symbol `x` at cell (m, c). On success returns the
    /// undo frame to pass to `unplace`; on rejection all effects are rolled
    /// back internally.
    fn try_place(&mut self, c: usize, m: usize, x: u8) -> Option<usize> {
        self.charge();
        if self.stopped {
            return None;
        }
        let layer = self.layers.last().unwrap();
        // nondecreasing row prefixes
        if m > 0 && layer.row_tied[m] && x < self.cols[c][m - 1] {
            return None;
        }
        // nondecreasing columns
        if c > 0 && layer.col_tied && x < self.cols[c - 1][m] {
            return None;
        }
        let remaining = self.rows - 1 - m;
        // every symbol still needs enough rows in this column
        let cnt = layer.sym_counts[x as usize] as usize;
        let new_deficit = layer.deficit - usize::from(cnt < self.required_per_symbol);
        if new_deficit > remaining {
            return None;
        }
        // tuple coverage feasibility for every subset ending at this column
        let frame = self.undo.len();
        let order = self.v;
        let layer = self.layers.last_mut().unwrap();
        let mut reject = false;
        for si in 0..layer.subsets.len() {
            let subset = &mut layer.subsets[si];
            let rank = subset.bases[m] as usize * order + x as usize;
            if subset.cov.mark(rank) {
                self.undo.push((si as u32, rank as u32));
            }
            if subset.cov.missing() > remaining {
                reject = true;
                break;
            }
        }
        if reject {
            for &(si, rank) in &self.undo[frame..] {
                layer.subsets[si as usize].cov.unmark(rank as usize);
            }
            self.undo.truncate(frame);
            return None;
        }
        layer.sym_counts[x as usize] += 1;
        layer.deficit = new_deficit;
        self.cols[c][m] = x;
        Some(frame)
    }

    fn unplace(&mut self, x: u8, frame: usize) {
        let layer = self.layers.last_mut().unwrap();
        for &(si, rank) in &self.undo[frame..] {
            layer.subsets[si as usize].cov.unmark(rank as usize);
        }
        self.undo.truncate(frame);
        let cnt = layer.sym_counts[x as usize] as usize - 1;
        layer.sym_counts[x as usize] = cnt as u32;
        if cnt < self.required_per_symbol {
            layer.deficit += 1;
        }
    }

    /// The complete columns 0..=c flattened column-major.
    fn prefix_flat(&self, c: usize) -> Vec<u8> {
        let mut flat = Vec::with_capacity((c + 1) * self.rows);
        for col in &self.cols[..=c] {
            flat.extend_from_slice(col);
        }
        flat
    }

    /// A tie group [start, end) of the filling column just closed: advance
    /// the comparison against every relabeled image (rows sorted within the
    /// group). Returns true when some image now flattens strictly smaller,
    /// which is a genuine isomorphism beating every completion of this
    /// branch, so the caller prunes.
    fn close_group(&mut self, c: usize, start: usize, end: usize) -> bool {
        let col = &self.cols[c];
        let layer = self.layers.last_mut().unwrap();
        let mut counts = [0usize; 8];
        for (ei, eps) in self.relabelings.iter().enumerate() {
            if layer.eps_state[ei] != 0 {
                continue;
            }
            counts[..self.v].fill(0);
            for &sym in &col[start..end] {
                counts[eps[sym as usize] as usize] += 1;
            }
            let mut pos = start;
            'image: for (val, &cnt) in counts[..self.v].iter().enumerate() {
                for _ in 0..cnt {
                    match (val as u8).cmp(&col[pos]) {
                        std::cmp::Ordering::Less => return true,
                        std::cmp::Ordering::Greater => {
                            layer.eps_state[ei] = 1;
                            break 'image;
                        }
                        std::cmp::Ordering::Equal => pos += 1,
                    }
                }
            }
        }
        false
    }

    fn column_done(&mut self, c: usize) {
        if self.stopped {
            return;
        }
        if exists_smaller_arrangement(self.rows, self.v, &self.cols[..=c], self.prefix_flat(c)) {
            return;
        }
        if c + 1 == self.k {
            // the prefix test over all k columns is the full canonicity
            // check, so this array is the minimum of its class
            let params = Params::new(self.rows, self.t, self.k, self.v).expect("search params");
            let array =
                CoveringArray::from_columns(params, &self.cols).expect("search cells in range");
            debug_assert!(verify_strength(&array, self.t).unwrap());
            self.members.push(CanonicalForm::new_unchecked(array));
            self.control.add_result();
        } else if self.frontier_at == Some(c + 1) {
            self.frontier.push(self.cols[..=c].to_vec());
        } else {
            self.descend(c + 1);
        }
    }

    fn descend(&mut self, c: usize) {
        self.push_layer(c);
        self.fill_cell(c, 0);
        self.pop_layer();
    }

    fn fill_cell(&mut self, c: usize, m: usize) {
        if self.stopped {
            return;
        }
        // a row that breaks the prefix tie closes the open tie group; the
        // last group closes when the column completes
        let closes = !self.relabelings.is_empty()
            && (m == self.rows || (m > 0 && !self.layers.last().unwrap().row_tied[m]));
        let mut saved = None;
        if closes {
            let layer = self.layers.last().unwrap();
            let start = layer.group_start;
            saved = Some((layer.eps_state.clone(), start));
            if self.close_group(c, start, m) {
                let (state, start) = saved.unwrap();
                let layer = self.layers.last_mut().unwrap();
                layer.eps_state = state;
                layer.group_start = start;
                return;
            }
            self.layers.last_mut().unwrap().group_start = m;
        }
        if m == self.rows {
            self.column_done(c);
        } else {
            self.fill_values(c, m);
        }
        if let Some((state, start)) = saved {
            let layer = self.layers.last_mut().unwrap();
            layer.eps_state = state;
            layer.group_start = start;
        }
    }

    fn fill_values(&mut self, c: usize, m: usize) {
        for x in 0..self.v as u8 {
            let Some(frame) = self.try_place(c, m, x) else {
                if self.stopped {
                    return;
                }
                continue;
            };
            let col_tied_before = {
                let layer = self.layers.last_mut().unwrap();
                let before = layer.col_tied;
                if c > 0 {
                    layer.col_tied = before && x == self.cols[c - 1][m];
                }
                before
            };
            self.fill_cell(c, m + 1);
            self.layers.last_mut().unwrap().col_tied = col_tied_before;
            self.unplace(x, frame);
            if self.stopped {
                return;
            }
        }
    }

    /// Re-apply a known-good column prefix, rebuilding all layer state.
    fn replay(&mut self, prefix: &[Vec<u8>]) {
        for (c, col) in prefix.iter().enumerate() {
            self.push_layer(c);
            for (m, &x) in col.iter().enumerate() {
                let placed = self.try_place(c, m, x);
                if self.stopped {
                    return;
                }
                assert!(placed.is_some(), "frontier prefix must replay cleanly");
                if c > 0 {
                    let layer = self.layers.last_mut().unwrap();
                    layer.col_tied = layer.col_tied && x == self.cols[c - 1][m];
                }
            }
        }
    }
}

/// Generate every non-isomorphic CA with the given parameters: exactly one
/// representative (the class minimum) per isomorphism class, sorted by lex
/// vector. An empty library means no covering array with these parameters
/// exists.
pub fn generate_distinct(params: Params, options: &GenOptions) -> Result<GenOutcome> {
    let control = options
        .control
        .clone()
        .unwrap_or_else(|| RunControl::new(options.budget));
    let workers = options.workers.max(1);
    let k = params.columns();
    let split_at = options.split_columns.min(k.saturating_sub(1));

    // Enumerate the frontier prefixes sequentially.
    let frontier: Vec<Vec<Vec<u8>>> = if split_at == 0 {
        vec![Vec::new()]
    } else {
        let mut state = GenState::new(params, &control)?;
        state.frontier_at = Some(split_at);
        state.descend(0);
        state.flush_charges();
        if control.is_cancelled() {
            return Err(control.budget_error());
        }
        std::mem::take(&mut state.frontier)
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CaError::Infeasible(format!("worker pool: {e}")))?;

    let per_unit: Vec<Result<Vec<CanonicalForm>>> = pool.install(|| {
        frontier
            .par_iter()
            .map(|prefix| {
                let mut state = GenState::new(params, &control)?;
                state.replay(prefix);
                if !state.stopped {
                    state.descend(prefix.len());
                }
                state.flush_charges();
                Ok(state.members)
            })
            .collect()
    });

    let mut members = Vec::new();
    for unit in per_unit {
        members.extend(unit?);
    }
    if control.is_cancelled() {
        return Err(control.budget_error());
    }
    let stats = GenStats {
        nodes: control.nodes(),
        members: members.len(),
        elapsed: control.elapsed(),
    };
    Ok(GenOutcome {
        library: CaLibrary::new(params, members)?,
        stats,
    })
}

/// Independent oracle: enumerate every possible cell assignment, keep
/// the covering arrays, and bucket them by canonical minimum. Only feasible
/// when `order^(rows*columns)` is at most 2^24; larger inputs are refused
/// up front.
pub fn brute_force_distinct(params: Params) -> Result<CaLibrary> {
    let cells = params.rows() * params.columns();
    let space = (params.order() as u64).checked_pow(cells.min(u32::MAX as usize) as u32);
    match space {
        Some(s) if s <= 1 << 24 => {}
        _ => {
            return Err(CaError::Infeasible(format!(
                "{}^{} assignments is beyond the brute-force guard of 2^24",
                params.order(),
                cells
            )));
        }
    }

    let mut assignment = vec![0u8; cells];
    let mut minima = std::collections::BTreeMap::new();
    loop {
        let array = CoveringArray::new(params, assignment.clone())?;
        if verify_strength(&array, params.strength())? {
            let min = canonical_minimum(&array);
            minima.entry(min.lex().clone()).or_insert(min);
        }
        // odometer over the cells, last cell fastest
        let mut i = cells;
        loop {
            if i == 0 {
                let members: Vec<CanonicalForm> = minima.into_values().collect();
                return CaLibrary::new(params, members);
            }
            i -= 1;
            if (assignment[i] as usize) + 1 < params.order() {
                assignment[i] += 1;
                break;
            }
            assignment[i] = 0;
        }
    }
}
