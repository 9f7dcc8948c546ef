//! Array representation and the structural transforms used by the
//! juxtaposition decomposition: vertical stacking, constant-column append,
//! and splitting by the last column.

use crate::error::{CaError, Result};

/// Parameter set of a covering array: `rows` x `columns` over `order`
/// symbols with claimed strength `strength`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Params {
    rows: usize,
    strength: usize,
    columns: usize,
    order: usize,
}

impl Params {
    pub fn new(rows: usize, strength: usize, columns: usize, order: usize) -> Result<Params> {
        if rows == 0 {
            return Err(CaError::invalid("row count must be positive"));
        }
        if columns == 0 {
            return Err(CaError::invalid("column count must be positive"));
        }
        if strength == 0 {
            return Err(CaError::invalid("strength must be positive"));
        }
        if strength > columns {
            return Err(CaError::invalid(format!(
                "strength {strength} exceeds column count {columns}"
            )));
        }
        if !(2..=256).contains(&order) {
            return Err(CaError::invalid(format!(
                "order {order} out of supported range 2..=256"
            )));
        }
        Ok(Params {
            rows,
            strength,
            columns,
            order,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn strength(&self) -> usize {
        self.strength
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of distinct `s`-tuples over the alphabet, `order^s`.
    /// Errors when the count does not fit in a usize.
    pub fn tuple_count(order: usize, s: usize) -> Result<usize> {
        let mut n: usize = 1;
        for _ in 0..s {
            n = n
                .checked_mul(order)
                .ok_or_else(|| CaError::Infeasible(format!("{order}^{s} overflows")))?;
        }
        Ok(n)
    }
}

/// An N x k symbol matrix over Z_v with a claimed strength. Construction
/// validates dimensions and symbol range; coverage itself is checked
/// separately by `verify_strength`.
///
/// Immutable after construction and cheap to share between workers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoveringArray {
    params: Params,
    /// Row-major cells; `cells[row * columns + col]`.
    cells: Vec<u8>,
}

impl CoveringArray {
    pub fn new(params: Params, cells: Vec<u8>) -> Result<CoveringArray> {
        if cells.len() != params.rows * params.columns {
            return Err(CaError::invalid(format!(
                "cell count {} does not match {}x{}",
                cells.len(),
                params.rows,
                params.columns
            )));
        }
        if let Some(pos) = cells.iter().position(|&c| (c as usize) >= params.order) {
            return Err(CaError::invalid(format!(
                "symbol {} at row {} column {} out of range for order {}",
                cells[pos],
                pos / params.columns,
                pos % params.columns,
                params.order
            )));
        }
        Ok(CoveringArray { params, cells })
    }

    /// Build from row-major rows.
    pub fn from_rows(params: Params, rows: &[Vec<u8>]) -> Result<CoveringArray> {
        let mut cells = Vec::with_capacity(params.rows * params.columns);
        for row in rows {
            if row.len() != params.columns {
                return Err(CaError::invalid("row length does not match column count"));
            }
            cells.extend_from_slice(row);
        }
        CoveringArray::new(params, cells)
    }

    /// Build from column slices (each of length `rows`).
    pub fn from_columns(params: Params, columns: &[Vec<u8>]) -> Result<CoveringArray> {
        if columns.len() != params.columns {
            return Err(CaError::invalid("column count mismatch"));
        }
        let mut cells = vec![0u8; params.rows * params.columns];
        for (c, col) in columns.iter().enumerate() {
            if col.len() != params.rows {
                return Err(CaError::invalid("column length does not match row count"));
            }
            for (r, &val) in col.iter().enumerate() {
                cells[r * params.columns + c] = val;
            }
        }
        CoveringArray::new(params, cells)
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn rows(&self) -> usize {
        self.params.rows
    }

    pub fn columns(&self) -> usize {
        self.params.columns
    }

    pub fn order(&self) -> usize {
        self.params.order
    }

    pub fn strength(&self) -> usize {
        self.params.strength
    }

    pub fn cell(&self, row: usize, col: usize) -> u8 {
        self.cells[row * self.params.columns + col]
    }

    pub fn row(&self, row: usize) -> &[u8] {
        let k = self.params.columns;
        &self.cells[row * k..(row + 1) * k]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u8]> {
        self.cells.chunks_exact(self.params.columns)
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn column(&self, col: usize) -> Vec<u8> {
        (0..self.params.rows).map(|r| self.cell(r, col)).collect()
    }

    /// All columns as owned vectors (column-major copy).
    pub fn to_columns(&self) -> Vec<Vec<u8>> {
        (0..self.params.columns).map(|c| self.column(c)).collect()
    }

    /// Same cells with a different claimed strength. Useful when a transform
    /// provably raises or lowers the strength of interest; no coverage check
    /// is performed here.
    pub fn with_strength(&self, strength: usize) -> Result<CoveringArray> {
        let params = Params::new(
            self.params.rows,
            strength,
            self.params.columns,
            self.params.order,
        )?;
        Ok(CoveringArray {
            params,
            cells: self.cells.clone(),
        })
    }

    /// Rows sorted lexicographically; an isomorphic array.
    pub fn row_sorted(&self) -> CoveringArray {
        let mut rows: Vec<&[u8]> = self.row_iter().collect();
        rows.sort_unstable();
        let cells = rows.concat();
        CoveringArray {
            params: self.params,
            cells,
        }
    }
}

/// A bijection on the symbol set {0, .., v-1}; a column relabeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolPermutation {
    map: Vec<u8>,
}

impl SymbolPermutation {
    pub fn new(map: Vec<u8>) -> Result<SymbolPermutation> {
        let v = map.len();
        if v == 0 || v > 256 {
            return Err(CaError::invalid("permutation size out of range"));
        }
        let mut seen = vec![false; v];
        for &m in &map {
            let m = m as usize;
            if m >= v || seen[m] {
                return Err(CaError::invalid("mapping is not a bijection"));
            }
            seen[m] = true;
        }
        Ok(SymbolPermutation { map })
    }

    pub fn identity(order: usize) -> SymbolPermutation {
        SymbolPermutation {
            map: (0..order).map(|s| s as u8).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, symbol: u8) -> u8 {
        self.map[symbol as usize]
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.map
    }

    pub fn inverse(&self) -> SymbolPermutation {
        let mut inv = vec![0u8; self.map.len()];
        for (i, &m) in self.map.iter().enumerate() {
            inv[m as usize] = i as u8;
        }
        SymbolPermutation { map: inv }
    }

    /// All v! permutations in lexicographic order of their mapping vectors,
    /// identity first. Factorial in `order`; intended for the small alphabets
    /// this crate targets.
    pub fn all(order: usize) -> Vec<SymbolPermutation> {
        let mut out = Vec::new();
        for_each_permutation(order, |map| {
            out.push(SymbolPermutation { map: map.to_vec() });
        });
        out
    }
}

/// Visit all permutations of {0, .., order-1} in lexicographic order
/// (identity first) without materializing the full set.
pub(crate) fn for_each_permutation(order: usize, mut f: impl FnMut(&[u8])) {
    for_each_permutation_until(order, |p| {
        f(p);
        false
    });
}

/// Like `for_each_permutation`, but stops (returning true) as soon as the
/// visitor returns true.
pub(crate) fn for_each_permutation_until(order: usize, mut f: impl FnMut(&[u8]) -> bool) -> bool {
    let mut map: Vec<u8> = (0..order).map(|s| s as u8).collect();
    loop {
        if f(&map) {
            return true;
        }
        // next lexicographic permutation
        let Some(i) = (0..order.saturating_sub(1))
            .rev()
            .find(|&i| map[i] < map[i + 1])
        else {
            return false;
        };
        let j = (i + 1..order).rev().find(|&j| map[j] > map[i]).unwrap();
        map.swap(i, j);
        map[i + 1..].reverse();
    }
}

/// Apply a relabeling element-wise to one column.
pub fn relabel_column(column: &[u8], eps: &SymbolPermutation) -> Result<Vec<u8>> {
    let v = eps.order();
    column
        .iter()
        .map(|&s| {
            if (s as usize) < v {
                Ok(eps.apply(s))
            } else {
                Err(CaError::invalid(format!(
                    "symbol {s} out of range for order {v}"
                )))
            }
        })
        .collect()
}

/// Vertical juxtaposition: concatenate the rows of `blocks` in order.
/// All blocks must share column count and order; the claimed strength of the
/// result is the minimum of the blocks' claims.
pub fn vstack(blocks: &[CoveringArray]) -> Result<CoveringArray> {
    let first = blocks
        .first()
        .ok_or_else(|| CaError::invalid("vstack of zero blocks"))?;
    let columns = first.columns();
    let order = first.order();
    let mut strength = first.strength();
    let mut rows = 0usize;
    for b in blocks {
        if b.columns() != columns || b.order() != order {
            return Err(CaError::invalid(
                "vstack blocks must share column count and order",
            ));
        }
        strength = strength.min(b.strength());
        rows += b.rows();
    }
    let mut cells = Vec::with_capacity(rows * columns);
    for b in blocks {
        cells.extend_from_slice(b.cells());
    }
    let params = Params::new(rows, strength, columns, order)?;
    CoveringArray::new(params, cells)
}

/// Append one column holding `sizes[i]` copies of symbol `i`, in block
/// order: the result is `(J E)` for `E = (0.. 1.. v-1..)^T`.
pub fn with_constant_column(j: &CoveringArray, sizes: &[usize]) -> Result<CoveringArray> {
    if sizes.len() != j.order() {
        return Err(CaError::invalid(format!(
            "expected {} block sizes, got {}",
            j.order(),
            sizes.len()
        )));
    }
    let total: usize = sizes.iter().sum();
    if total != j.rows() {
        return Err(CaError::invalid(format!(
            "block sizes sum to {total}, array has {} rows",
            j.rows()
        )));
    }
    let k = j.columns();
    let mut cells = Vec::with_capacity(j.rows() * (k + 1));
    let mut row = 0usize;
    for (symbol, &size) in sizes.iter().enumerate() {
        for _ in 0..size {
            cells.extend_from_slice(j.row(row));
            cells.push(symbol as u8);
            row += 1;
        }
    }
    let params = Params::new(j.rows(), j.strength(), k + 1, j.order())?;
    CoveringArray::new(params, cells)
}

/// Result of splitting an array by its last column: block `i` holds the rows
/// whose last symbol is `i`, in their original (stable) order, with the last
/// column removed. Blocks may be empty, so the raw cells are stored and
/// converted to `CoveringArray` on demand.
#[derive(Debug, Clone)]
pub struct BlockSplit {
    order: usize,
    columns: usize,
    block_strength: usize,
    sizes: Vec<usize>,
    blocks: Vec<Vec<u8>>,
}

impl BlockSplit {
    /// Rows per symbol, indexed by symbol.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Block `i` as a covering array claiming strength one below the source
    /// array's claim; `None` when the block is empty (or the source had a
    /// single column).
    pub fn block(&self, i: usize) -> Option<CoveringArray> {
        if self.sizes[i] == 0 || self.columns == 0 {
            return None;
        }
        let params = Params::new(self.sizes[i], self.block_strength, self.columns, self.order)
            .expect("split block params");
        Some(CoveringArray::new(params, self.blocks[i].clone()).expect("split block cells"))
    }

    /// The non-empty blocks in symbol order.
    pub fn arrays(&self) -> Vec<CoveringArray> {
        (0..self.blocks.len())
            .filter_map(|i| self.block(i))
            .collect()
    }
}

/// Stable-sort the rows of `c` by their last-column symbol and strip that
/// column. If `c` has strength s, each block is a covering array of strength
/// s-1 on the remaining columns (callers may assert via `verify_strength`).
pub fn split_by_last_column(c: &CoveringArray) -> BlockSplit {
    let v = c.order();
    let k = c.columns();
    let last = k - 1;
    let mut sizes = vec![0usize; v];
    let mut blocks = vec![Vec::new(); v];
    for row in c.row_iter() {
        let symbol = row[last] as usize;
        sizes[symbol] += 1;
        blocks[symbol].extend_from_slice(&row[..last]);
    }
    BlockSplit {
        order: v,
        columns: k - 1,
        block_strength: c.strength().saturating_sub(1).max(1),
        sizes,
        blocks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arr(rows: usize, t: usize, k: usize, v: usize, cells: &[u8]) -> CoveringArray {
        CoveringArray::new(Params::new(rows, t, k, v).unwrap(), cells.to_vec()).unwrap()
    }

    #[test]
    fn params_rejects_degenerate() {
        assert!(Params::new(0, 1, 1, 2).is_err());
        assert!(Params::new(1, 1, 0, 2).is_err());
        assert!(Params::new(1, 0, 1, 2).is_err());
        assert!(Params::new(1, 2, 1, 2).is_err());
        assert!(Params::new(1, 1, 1, 1).is_err());
        assert!(Params::new(1, 1, 1, 2).is_ok());
    }

    #[test]
    fn array_rejects_out_of_range_symbol() {
        let p = Params::new(2, 1, 2, 2).unwrap();
        let err = CoveringArray::new(p, vec![0, 1, 2, 0]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("row 1"), "{msg}");
        assert!(msg.contains("column 0"), "{msg}");
    }

    #[test]
    fn relabel_identity_and_inverse() {
        let col = vec![0u8, 1, 2];
        let id = SymbolPermutation::identity(3);
        assert_eq!(relabel_column(&col, &id).unwrap(), col);

        let eps = SymbolPermutation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(relabel_column(&col, &eps).unwrap(), vec![2, 0, 1]);
        let back = relabel_column(&relabel_column(&col, &eps).unwrap(), &eps.inverse()).unwrap();
        assert_eq!(back, col);
    }

    #[test]
    fn permutations_lex_order_identity_first() {
        let all = SymbolPermutation::all(3);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], SymbolPermutation::identity(3));
        for w in all.windows(2) {
            assert!(w[0].as_slice() < w[1].as_slice());
        }
    }

    #[test]
    fn vstack_single_block_is_identity() {
        let a = arr(2, 1, 2, 2, &[0, 1, 1, 0]);
        assert_eq!(vstack(std::slice::from_ref(&a)).unwrap(), a);
    }

    #[test]
    fn vstack_orders_blocks() {
        let a = arr(2, 1, 2, 2, &[0, 0, 0, 1]);
        let b = arr(2, 1, 2, 2, &[1, 0, 1, 1]);
        let s = vstack(&[a, b]).unwrap();
        assert_eq!(s.rows(), 4);
        assert_eq!(s.cells(), &[0, 0, 0, 1, 1, 0, 1, 1]);
    }

    #[test]
    fn vstack_rejects_mismatched_shapes() {
        let a = arr(2, 1, 2, 2, &[0, 1, 1, 0]);
        let b = arr(2, 1, 3, 2, &[0, 1, 0, 1, 0, 1]);
        assert!(vstack(&[a.clone(), b]).is_err());
        let c = arr(2, 1, 2, 3, &[0, 1, 1, 0]);
        assert!(vstack(&[a, c]).is_err());
    }

    #[test]
    fn constant_column_blocks() {
        let j = arr(4, 1, 2, 2, &[0, 0, 0, 1, 1, 0, 1, 1]);
        let c = with_constant_column(&j, &[2, 2]).unwrap();
        assert_eq!(c.column(2), vec![0, 0, 1, 1]);
        assert!(with_constant_column(&j, &[2, 1]).is_err());
        assert!(with_constant_column(&j, &[4]).is_err());
    }

    #[test]
    fn split_constant_last_column_gives_empty_block() {
        let c = arr(3, 1, 2, 2, &[0, 0, 1, 0, 0, 0]);
        let split = split_by_last_column(&c);
        assert_eq!(split.sizes(), &[3, 0]);
        assert!(split.block(1).is_none());
        let b0 = split.block(0).unwrap();
        assert_eq!(b0.cells(), &[0, 1, 0]);
    }

    #[test]
    fn split_then_reassemble_round_trip() {
        // 4x3 binary rows {000, 011, 101, 110}
        let c = arr(4, 2, 3, 2, &[0, 0, 0, 0, 1, 1, 1, 0, 1, 1, 1, 0]);
        let split = split_by_last_column(&c);
        let stacked = vstack(&split.arrays()).unwrap();
        let rebuilt = with_constant_column(&stacked, split.sizes()).unwrap();
        // Same rows as c up to a row permutation.
        let mut want: Vec<&[u8]> = c.row_iter().collect();
        let mut got: Vec<&[u8]> = rebuilt.row_iter().collect();
        want.sort_unstable();
        got.sort_unstable();
        assert_eq!(want, got);
    }
}
