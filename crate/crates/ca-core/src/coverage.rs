//! Strength verification, full and incremental.
//!
//! Tuple ranking is fixed as mixed-radix over the chosen columns in
//! ascending column order: rank = sum of x_j * v^(s-1-j), so the last
//! (highest-index) column contributes the least significant digit. Bit
//! vectors built on this ranking are portable across the crate.

use crate::array::{CoveringArray, Params};
use crate::error::{CaError, Result};

/// Occupancy bit set over the `v^s` tuples of one column subset.
#[derive(Debug, Clone)]
pub struct TupleCoverage {
    bits: Vec<u64>,
    covered: usize,
    size: usize,
}

impl TupleCoverage {
    pub fn new(size: usize) -> TupleCoverage {
        TupleCoverage {
            bits: vec![0; size.div_ceil(64)],
            covered: 0,
            size,
        }
    }

    /// Mark a tuple rank; returns true when it was not covered before.
    pub fn mark(&mut self, rank: usize) -> bool {
        let word = rank / 64;
        let bit = 1u64 << (rank % 64);
        if self.bits[word] & bit == 0 {
            self.bits[word] |= bit;
            self.covered += 1;
            true
        } else {
            false
        }
    }

    /// Undo a `mark` that returned true.
    pub fn unmark(&mut self, rank: usize) {
        let word = rank / 64;
        let bit = 1u64 << (rank % 64);
        debug_assert!(self.bits[word] & bit != 0);
        self.bits[word] &= !bit;
        self.covered -= 1;
    }

    pub fn covered(&self) -> usize {
        self.covered
    }

    pub fn missing(&self) -> usize {
        self.size - self.covered
    }

    pub fn is_complete(&self) -> bool {
        self.covered == self.size
    }

    /// Rank of the first uncovered tuple, if any.
    pub fn first_uncovered(&self) -> Option<usize> {
        for (w, &word) in self.bits.iter().enumerate() {
            if word != u64::MAX {
                let rank = w * 64 + (!word).trailing_zeros() as usize;
                if rank < self.size {
                    return Some(rank);
                }
            }
        }
        None
    }

    pub fn clear(&mut self) {
        self.bits.fill(0);
        self.covered = 0;
    }
}

/// Per-subset coverage state for one strength. Each checked column subset
/// keeps its own bit vector and covered count.
#[derive(Debug, Clone)]
pub struct CoverageTracker {
    strength: usize,
    order: usize,
    tuple_count: usize,
    subsets: Vec<(Vec<usize>, TupleCoverage)>,
}

impl CoverageTracker {
    pub fn new(strength: usize, order: usize) -> Result<CoverageTracker> {
        let tuple_count = Params::tuple_count(order, strength)?;
        Ok(CoverageTracker {
            strength,
            order,
            tuple_count,
            subsets: Vec::new(),
        })
    }

    pub fn strength(&self) -> usize {
        self.strength
    }

    /// Feed every row of the given column subset and record its coverage.
    /// Returns true when the subset covers all `v^s` tuples.
    pub fn cover_subset(&mut self, columns: Vec<usize>, cols: &[&[u8]], rows: usize) -> bool {
        debug_assert_eq!(columns.len(), self.strength);
        let mut cov = TupleCoverage::new(self.tuple_count);
        for row in 0..rows {
            cov.mark(rank_of_row(&columns, cols, row, self.order));
            if cov.is_complete() {
                break;
            }
        }
        let complete = cov.is_complete();
        self.subsets.push((columns, cov));
        complete
    }

    pub fn is_complete(&self) -> bool {
        self.subsets.iter().all(|(_, c)| c.is_complete())
    }

    pub fn subsets(&self) -> &[(Vec<usize>, TupleCoverage)] {
        &self.subsets
    }
}

/// Mixed-radix rank of the tuple formed by `row` in the given columns
/// (ascending column order, last column least significant).
#[inline]
pub(crate) fn rank_of_row(columns: &[usize], cols: &[&[u8]], row: usize, order: usize) -> usize {
    let mut rank = 0usize;
    for &c in columns {
        rank = rank * order + cols[c][row] as usize;
    }
    rank
}

/// Decode a rank back into the tuple it stands for.
pub(crate) fn tuple_of_rank(mut rank: usize, strength: usize, order: usize) -> Vec<u8> {
    let mut tuple = vec![0u8; strength];
    for slot in tuple.iter_mut().rev() {
        *slot = (rank % order) as u8;
        rank /= order;
    }
    tuple
}

/// All size-`s` subsets of {0, .., n-1} in lexicographic order.
pub(crate) fn combinations(n: usize, s: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if s > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..s).collect();
    loop {
        out.push(cur.clone());
        // advance
        let mut i = s;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - s {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..s {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// A witness of failed coverage: a column subset and the first tuple it
/// never contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageWitness {
    pub columns: Vec<usize>,
    pub tuple: Vec<u8>,
}

/// True iff every `strength`-column subarray of `array` covers all tuples.
/// The array is not modified.
pub fn verify_strength(array: &CoveringArray, strength: usize) -> Result<bool> {
    Ok(find_uncovered(array, strength)?.is_none())
}

/// First uncovered (column subset, tuple) pair in deterministic order:
/// subsets lexicographic, tuples by rank. `None` means full coverage.
pub fn find_uncovered(array: &CoveringArray, strength: usize) -> Result<Option<CoverageWitness>> {
    if strength == 0 || strength > array.columns() {
        return Err(CaError::invalid(format!(
            "strength {strength} out of range for {} columns",
            array.columns()
        )));
    }
    let order = array.order();
    let tuple_count = Params::tuple_count(order, strength)?;
    let columns = array.to_columns();
    let col_refs: Vec<&[u8]> = columns.iter().map(|c| c.as_slice()).collect();
    let rows = array.rows();
    let mut cov = TupleCoverage::new(tuple_count);
    for subset in combinations(array.columns(), strength) {
        cov.clear();
        for row in 0..rows {
            cov.mark(rank_of_row(&subset, &col_refs, row, order));
            if cov.is_complete() {
                break;
            }
        }
        if let Some(rank) = cov.first_uncovered() {
            return Ok(Some(CoverageWitness {
                columns: subset,
                tuple: tuple_of_rank(rank, strength, order),
            }));
        }
    }
    Ok(None)
}

/// Incremental check used while an array grows column by column: true iff
/// every `strength`-subset of columns {0..r} that includes column `r` covers
/// all tuples. Subsets not involving `r` were certified when their own last
/// column was placed, so they are not re-checked.
///
/// `cols` are the columns of the partial array; columns `0..=r` must be
/// fully assigned over `rows` rows.
pub fn verify_prefix(
    cols: &[&[u8]],
    rows: usize,
    r: usize,
    strength: usize,
    order: usize,
) -> Result<bool> {
    if strength == 0 {
        return Err(CaError::invalid("strength must be positive"));
    }
    if r + 1 < strength {
        return Err(CaError::invalid(format!(
            "column index {r} leaves fewer than {strength} assigned columns"
        )));
    }
    if r >= cols.len() {
        return Err(CaError::invalid(format!(
            "column index {r} out of range for {} columns",
            cols.len()
        )));
    }
    let tuple_count = Params::tuple_count(order, strength)?;
    let mut cov = TupleCoverage::new(tuple_count);
    for others in combinations(r, strength - 1) {
        let mut subset = others;
        subset.push(r);
        cov.clear();
        for row in 0..rows {
            cov.mark(rank_of_row(&subset, cols, row, order));
            if cov.is_complete() {
                break;
            }
        }
        if !cov.is_complete() {
            return Ok(false);
        }
    }
    Ok(true)
}
