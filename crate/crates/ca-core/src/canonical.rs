//! Lexicographic order on arrays and the minimum representative of an
//! isomorphism class, where an isomorphism is any combination of a row
//! permutation, a column permutation, and an independent symbol permutation
//! per column.
//!
//! The minimum search branches over column order and per-column relabelings;
//! for any fixed choice of columns the row order that minimizes the
//! column-major flattening is the lexicographic row sort, so rows are never
//! branched on. A partial candidate is pruned as soon as its built prefix
//! exceeds the best vector found so far.

use std::cmp::Ordering;

use crate::array::{CoveringArray, Params};
use crate::error::{CaError, Result};

/// Column-major flattening of an array, the comparison key for isomorphism
/// classes. Entry `j*N + i` is cell `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LexVector(Vec<u8>);

impl LexVector {
    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }
}

pub fn lex_vector(a: &CoveringArray) -> LexVector {
    LexVector(flatten(a))
}

fn flatten(a: &CoveringArray) -> Vec<u8> {
    let n = a.rows();
    let k = a.columns();
    let mut out = Vec::with_capacity(n * k);
    for c in 0..k {
        for r in 0..n {
            out.push(a.cell(r, c));
        }
    }
    out
}

fn same_shape(a: &CoveringArray, b: &CoveringArray) -> bool {
    a.rows() == b.rows() && a.columns() == b.columns() && a.order() == b.order()
}

/// First-difference comparison of the lex vectors of two equally shaped
/// arrays.
pub fn lex_compare(a: &CoveringArray, b: &CoveringArray) -> Result<Ordering> {
    if !same_shape(a, b) {
        return Err(CaError::invalid("lex_compare requires identical shapes"));
    }
    Ok(flatten(a).cmp(&flatten(b)))
}

/// The minimum of an isomorphism class together with its cached lex vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    array: CoveringArray,
    lex: LexVector,
}

impl CanonicalForm {
    /// Wrap an array the caller asserts to be its own class minimum.
    /// `canonical_minimum` is the checked constructor; this one exists for
    /// deserialization paths where re-canonicalizing is optional.
    pub fn new_unchecked(array: CoveringArray) -> CanonicalForm {
        let lex = lex_vector(&array);
        CanonicalForm { array, lex }
    }

    pub fn array(&self) -> &CoveringArray {
        &self.array
    }

    pub fn lex(&self) -> &LexVector {
        &self.lex
    }

    pub fn into_array(self) -> CoveringArray {
        self.array
    }
}

/// Rebuild an array from its column-major flattening.
fn array_from_flat(params: Params, flat: &[u8]) -> CoveringArray {
    let n = params.rows();
    let k = params.columns();
    let mut cells = vec![0u8; n * k];
    for c in 0..k {
        for r in 0..n {
            cells[r * k + c] = flat[c * n + r];
        }
    }
    CoveringArray::new(params, cells).expect("flattening preserves shape and symbols")
}

/// The isomorphic array with the minimum lex vector. Deterministic: the
/// result is fully determined by the minimal vector itself.
///
/// Supports up to 64 columns; the search is factorial in the worst case and
/// intended for the small arrays this crate targets.
pub fn canonical_minimum(a: &CoveringArray) -> CanonicalForm {
    assert!(
        a.columns() <= 64,
        "canonical search supports at most 64 columns"
    );
    let cols = a.to_columns();
    let seed = flatten(&a.row_sorted());
    let mut engine = MinEngine::new(a.rows(), a.order(), &cols, seed, false);
    engine.run();
    let best = engine.best;
    let array = array_from_flat(a.params(), &best);
    CanonicalForm {
        array,
        lex: LexVector(best),
    }
}

/// True iff the two arrays are in the same isomorphism class.
pub fn are_isomorphic(a: &CoveringArray, b: &CoveringArray) -> Result<bool> {
    if !same_shape(a, b) {
        return Err(CaError::invalid("are_isomorphic requires identical shapes"));
    }
    Ok(canonical_minimum(a).lex == canonical_minimum(b).lex)
}

/// Sound-but-incomplete minimality test for a partial array whose first
/// `filled` cells (in column-major order) are assigned. Never returns false
/// for a prefix of a class minimum; may return true for prefixes that a
/// stronger test would prune.
///
/// The bounded effort is: nondecreasing row and column prefixes, exact
/// minimality of the complete-column prefix (columns permuted and relabeled,
/// rows re-sorted), and relabelings of the partial column with rows re-sorted
/// inside the tie groups of the complete prefix.
pub fn is_partial_minimum(a: &CoveringArray, filled: usize) -> bool {
    let n = a.rows();
    let k = a.columns();
    let v = a.order();
    assert!(k <= 64, "canonical search supports at most 64 columns");
    let filled = filled.min(n * k);
    if filled == 0 {
        return true;
    }
    let complete = filled / n;
    let partial_len = filled % n;
    let cols = a.to_columns();

    // Row prefixes must be nondecreasing: row i has `complete` filled cells,
    // plus one more when i < partial_len.
    for i in 1..n {
        let len = complete + usize::from(i < partial_len);
        if len == 0 {
            break;
        }
        let mut ord = Ordering::Equal;
        for col in &cols[..len] {
            ord = col[i - 1].cmp(&col[i]);
            if ord != Ordering::Equal {
                break;
            }
        }
        if ord == Ordering::Greater {
            return false;
        }
    }

    // Column prefixes must be nondecreasing on their common filled length.
    for j in 1..complete {
        if cols[j - 1] > cols[j] {
            return false;
        }
    }
    if partial_len > 0
        && complete >= 1
        && cols[complete - 1][..partial_len] > cols[complete][..partial_len]
    {
        return false;
    }

    // Exact minimality of the complete-column prefix.
    if complete >= 1 {
        let mut current = Vec::with_capacity(complete * n);
        for col in &cols[..complete] {
            current.extend_from_slice(col);
        }
        if exists_smaller_arrangement(n, v, &cols[..complete], current) {
            return false;
        }
    }

    // Partial column: relabel it and re-sort rows inside the tie groups of
    // the complete prefix, restricted to the filled rows.
    if partial_len > 0 {
        let groups = prefix_tie_groups(&cols, complete, n);
        let col = &cols[complete];
        let mut found_smaller = false;
        crate::array::for_each_permutation_until(v, |eps| {
            let mut counts = vec![0usize; v];
            let mut pos = 0usize;
            for &(start, end) in &groups {
                if start >= partial_len {
                    break;
                }
                let end = end.min(partial_len);
                counts.fill(0);
                for &sym in &col[start..end] {
                    counts[eps[sym as usize] as usize] += 1;
                }
                for (val, &cnt) in counts.iter().enumerate() {
                    for _ in 0..cnt {
                        match (val as u8).cmp(&col[pos]) {
                            Ordering::Less => {
                                found_smaller = true;
                                return true;
                            }
                            Ordering::Greater => return false,
                            Ordering::Equal => pos += 1,
                        }
                    }
                }
            }
            false
        });
        if found_smaller {
            return false;
        }
    }

    true
}

/// Maximal runs of rows that agree on the first `complete` columns,
/// assuming rows are already sorted on that prefix.
fn prefix_tie_groups(cols: &[Vec<u8>], complete: usize, rows: usize) -> Vec<(usize, usize)> {
    if complete == 0 {
        return vec![(0, rows)];
    }
    let mut groups = Vec::new();
    let mut start = 0usize;
    for i in 1..rows {
        let differs = (0..complete).any(|j| cols[j][i] != cols[j][i - 1]);
        if differs {
            groups.push((start, i));
            start = i;
        }
    }
    groups.push((start, rows));
    groups
}

/// Does any column permutation + per-column relabeling + row sort of `cols`
/// flatten strictly below `current`? Used for partial-minimality pruning.
pub(crate) fn exists_smaller_arrangement(
    rows: usize,
    order: usize,
    cols: &[Vec<u8>],
    current: Vec<u8>,
) -> bool {
    let mut engine = MinEngine::new(rows, order, cols, current, true);
    engine.run();
    engine.improved
}

/// Branch-and-bound search over column order and relabelings; rows are
/// normalized by sorting, maintained incrementally through tie groups.
struct MinEngine<'a> {
    rows: usize,
    order: usize,
    cols: &'a [Vec<u8>],
    positions: usize,
    best: Vec<u8>,
    cand: Vec<u8>,
    stop_on_improve: bool,
    improved: bool,
}

impl<'a> MinEngine<'a> {
    fn new(
        rows: usize,
        order: usize,
        cols: &'a [Vec<u8>],
        seed: Vec<u8>,
        stop_on_improve: bool,
    ) -> MinEngine<'a> {
        let positions = cols.len();
        debug_assert_eq!(seed.len(), positions * rows);
        MinEngine {
            rows,
            order,
            cols,
            positions,
            cand: vec![0u8; seed.len()],
            best: seed,
            stop_on_improve,
            improved: false,
        }
    }

    fn run(&mut self) {
        let order_rows: Vec<u32> = (0..self.rows as u32).collect();
        let starts = vec![0u32];
        self.node(0, 0u64, &order_rows, &starts, true);
    }

    /// Place one more column; returns true when `best` was updated somewhere
    /// in this subtree.
    fn node(
        &mut self,
        pos: usize,
        used: u64,
        order_rows: &[u32],
        starts: &[u32],
        tight_in: bool,
    ) -> bool {
        if pos == self.positions {
            if !tight_in {
                self.best.copy_from_slice(&self.cand);
                self.improved = true;
                return true;
            }
            return false;
        }
        let n = self.rows;
        let v = self.order;
        let off = pos * n;
        let mut tight = tight_in;
        let mut updated = false;

        for c in 0..self.positions {
            if used & (1u64 << c) != 0 {
                continue;
            }
            let src = &self.cols[c];
            let stopped = crate::array::for_each_permutation_until(v, |eps| {
                // Sorted segment this (column, relabeling) contributes at
                // position `pos`, built group by group.
                let mut counts = vec![0u32; v];
                let mut w = off;
                for g in 0..starts.len() {
                    let s = starts[g] as usize;
                    let e = if g + 1 < starts.len() {
                        starts[g + 1] as usize
                    } else {
                        n
                    };
                    counts.fill(0);
                    for &row in &order_rows[s..e] {
                        counts[eps[src[row as usize] as usize] as usize] += 1;
                    }
                    for (val, &cnt) in counts.iter().enumerate() {
                        for _ in 0..cnt {
                            self.cand[w] = val as u8;
                            w += 1;
                        }
                    }
                }

                let child_tight = if tight {
                    match self.cand[off..off + n].cmp(&self.best[off..off + n]) {
                        Ordering::Greater => return false,
                        Ordering::Equal => true,
                        Ordering::Less => false,
                    }
                } else {
                    false
                };

                // Refined row order: stable buckets by the new values.
                let mut child_order = vec![0u32; n];
                let mut child_starts = Vec::with_capacity(starts.len() * 2);
                let mut offsets = vec![0usize; v];
                for g in 0..starts.len() {
                    let s = starts[g] as usize;
                    let e = if g + 1 < starts.len() {
                        starts[g + 1] as usize
                    } else {
                        n
                    };
                    counts.fill(0);
                    for &row in &order_rows[s..e] {
                        counts[eps[src[row as usize] as usize] as usize] += 1;
                    }
                    let mut acc = s;
                    for val in 0..v {
                        offsets[val] = acc;
                        if counts[val] > 0 {
                            child_starts.push(acc as u32);
                        }
                        acc += counts[val] as usize;
                    }
                    for &row in &order_rows[s..e] {
                        let val = eps[src[row as usize] as usize] as usize;
                        child_order[offsets[val]] = row;
                        offsets[val] += 1;
                    }
                }

                if self.node(
                    pos + 1,
                    used | (1u64 << c),
                    &child_order,
                    &child_starts,
                    child_tight,
                ) {
                    updated = true;
                    tight = true;
                    if self.stop_on_improve {
                        return true;
                    }
                }
                false
            });
            if stopped {
                return true;
            }
        }
        updated
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::{for_each_permutation, CoveringArray, Params};

    fn arr(rows: usize, t: usize, k: usize, v: usize, cells: &[u8]) -> CoveringArray {
        CoveringArray::new(Params::new(rows, t, k, v).unwrap(), cells.to_vec()).unwrap()
    }

    #[test]
    fn lex_vector_is_column_major() {
        let a = arr(2, 1, 2, 4, &[0, 1, 2, 3]);
        assert_eq!(lex_vector(&a).as_slice(), &[0, 2, 1, 3]);
    }

    #[test]
    fn lex_compare_total_order() {
        let a = arr(2, 1, 2, 2, &[0, 1, 1, 0]);
        let b = arr(2, 1, 2, 2, &[1, 0, 0, 1]);
        assert_eq!(lex_compare(&a, &a).unwrap(), Ordering::Equal);
        assert_eq!(lex_compare(&a, &b).unwrap(), Ordering::Less);
        assert_eq!(lex_compare(&b, &a).unwrap(), Ordering::Greater);
        let c = arr(2, 1, 3, 2, &[0, 1, 0, 1, 0, 1]);
        assert!(lex_compare(&a, &c).is_err());
    }

    #[test]
    fn canonical_single_column() {
        let a = arr(2, 1, 1, 2, &[1, 0]);
        let min = canonical_minimum(&a);
        assert_eq!(min.array().cells(), &[0, 1]);
        // fixed point
        let again = canonical_minimum(min.array());
        assert_eq!(again, min);
    }

    /// Apply an explicit isomorphism: row permutation, column permutation,
    /// and one relabeling per (target) column.
    fn apply_iso(
        a: &CoveringArray,
        row_perm: &[u8],
        col_perm: &[u8],
        relabels: &[&[u8]],
    ) -> CoveringArray {
        let n = a.rows();
        let k = a.columns();
        let mut cells = vec![0u8; n * k];
        for r in 0..n {
            for c in 0..k {
                let sym = a.cell(row_perm[r] as usize, col_perm[c] as usize);
                cells[r * k + c] = relabels[c][sym as usize];
            }
        }
        CoveringArray::new(a.params(), cells).unwrap()
    }

    #[test]
    fn orbit_of_3x2_partitions_by_canonical_minimum() {
        // fixed array; enumerate its full orbit (3! * 2! * (2!)^2 = 48 ops)
        let a = arr(3, 1, 2, 2, &[0, 1, 1, 0, 1, 1]);
        let min = canonical_minimum(&a);
        let mut orbit = std::collections::BTreeSet::new();
        let mut row_perms = Vec::new();
        for_each_permutation(3, |p| row_perms.push(p.to_vec()));
        let mut col_perms = Vec::new();
        for_each_permutation(2, |p| col_perms.push(p.to_vec()));
        let mut relabels = Vec::new();
        for_each_permutation(2, |p| relabels.push(p.to_vec()));
        for rp in &row_perms {
            for cp in &col_perms {
                for e0 in &relabels {
                    for e1 in &relabels {
                        let img = apply_iso(&a, rp, cp, &[e0, e1]);
                        assert_eq!(canonical_minimum(&img), min, "invariance failed");
                        orbit.insert(img.cells().to_vec());
                    }
                }
            }
        }
        // orbit size divides the group order
        assert_eq!(
            48 % orbit.len(),
            0,
            "orbit size {} must divide 48",
            orbit.len()
        );
        // the minimum is the smallest orbit element by lex vector
        let smallest = orbit
            .iter()
            .map(|cells| {
                let img = CoveringArray::new(a.params(), cells.clone()).unwrap();
                lex_vector(&img)
            })
            .min()
            .unwrap();
        assert_eq!(&smallest, min.lex());
    }

    #[test]
    fn isomorphic_to_row_shuffle() {
        let a = arr(4, 2, 3, 2, &[0, 0, 0, 0, 1, 1, 1, 0, 1, 1, 1, 0]);
        let shuffled = arr(4, 2, 3, 2, &[1, 1, 0, 0, 0, 0, 1, 0, 1, 0, 1, 1]);
        assert!(are_isomorphic(&a, &shuffled).unwrap());
        // reflexive and symmetric
        assert!(are_isomorphic(&a, &a).unwrap());
        assert!(are_isomorphic(&shuffled, &a).unwrap());
    }

    #[test]
    fn cell_flip_leaves_the_class() {
        // flipping one cell of a 4x3 pairwise array breaks coverage, so the
        // result cannot be isomorphic; confirmed against the full orbit of
        // 4! * 3! * (2!)^3 = 1152 operations
        let a = arr(4, 2, 3, 2, &[0, 0, 0, 0, 1, 1, 1, 0, 1, 1, 1, 0]);
        let mut cells = a.cells().to_vec();
        cells[0] ^= 1;
        let flipped = arr(4, 2, 3, 2, &cells);
        assert!(!are_isomorphic(&a, &flipped).unwrap());

        let mut row_perms = Vec::new();
        for_each_permutation(4, |p| row_perms.push(p.to_vec()));
        let mut col_perms = Vec::new();
        for_each_permutation(3, |p| col_perms.push(p.to_vec()));
        let mut relabels = Vec::new();
        for_each_permutation(2, |p| relabels.push(p.to_vec()));
        let mut ops = 0usize;
        for rp in &row_perms {
            for cp in &col_perms {
                for e0 in &relabels {
                    for e1 in &relabels {
                        for e2 in &relabels {
                            ops += 1;
                            let img = apply_iso(&a, rp, cp, &[e0, e1, e2]);
                            assert_ne!(img.cells(), flipped.cells());
                        }
                    }
                }
            }
        }
        assert_eq!(ops, 1152);
    }

    #[test]
    fn partial_minimum_examples() {
        // a single filled cell equal to 1 relabels to 0
        let a = arr(4, 1, 2, 2, &[1, 0, 0, 0, 0, 0, 0, 0]);
        assert!(!is_partial_minimum(&a, 1));

        // first column (0,0,1,0): row sort gives (0,0,0,1)
        let b = arr(4, 1, 2, 2, &[0, 0, 0, 0, 1, 0, 0, 0]);
        assert!(!is_partial_minimum(&b, 4));

        // prefixes of a canonical minimum stay minimal
        let ca = arr(4, 2, 3, 2, &[0, 0, 0, 0, 1, 1, 1, 0, 1, 1, 1, 0]);
        let min = canonical_minimum(&ca).into_array();
        for filled in 0..=12 {
            assert!(is_partial_minimum(&min, filled), "filled={filled}");
        }
    }

    #[test]
    fn minimum_never_exceeds_input() {
        let a = arr(3, 1, 3, 3, &[2, 1, 0, 1, 1, 2, 0, 2, 2]);
        let min = canonical_minimum(&a);
        assert!(min.lex() <= &lex_vector(&a));
        assert_eq!(canonical_minimum(min.array()), min);
    }
}
