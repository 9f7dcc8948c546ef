//! Enumeration of the block-size multisets a juxtaposition can use.

use std::fmt;

use crate::bounds::can_bound;
use crate::error::{CaError, Result};

/// Nondecreasing block sizes {N_0 <= .. <= N_{v-1}} summing to the target
/// row count, each at least the covering array number of the block
/// parameters. The only candidate decompositions of a strength-(t+1) array
/// into strength-t blocks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ValidMultiset {
    sizes: Vec<usize>,
}

impl ValidMultiset {
    pub fn new(sizes: Vec<usize>) -> Result<ValidMultiset> {
        if sizes.is_empty() {
            return Err(CaError::invalid("multiset must have at least one part"));
        }
        if sizes.windows(2).any(|w| w[0] > w[1]) {
            return Err(CaError::invalid("multiset parts must be nondecreasing"));
        }
        if sizes.contains(&0) {
            return Err(CaError::invalid("multiset parts must be positive"));
        }
        Ok(ValidMultiset { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }
}

impl fmt::Display for ValidMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in &self.sizes {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{s}")?;
            first = false;
        }
        Ok(())
    }
}

/// All nondecreasing `order`-part compositions of `total_rows` whose parts
/// are at least the (possibly lower-bound) covering array number of
/// (strength, columns, order), in lexicographic order. An empty list means
/// no strength-(t+1) array on one more column can exist at this size.
///
/// When only a lower bound is known the list can contain multisets that a
/// sharper bound would exclude; that only enlarges the search, never loses
/// solutions.
pub fn valid_multisets(
    total_rows: usize,
    strength: usize,
    columns: usize,
    order: usize,
) -> Vec<ValidMultiset> {
    let floor = can_bound(strength, columns, order).value;
    let mut out = Vec::new();
    let mut parts = Vec::with_capacity(order);
    extend(&mut out, &mut parts, total_rows, order, floor);
    out
}

fn extend(
    out: &mut Vec<ValidMultiset>,
    parts: &mut Vec<usize>,
    remaining: usize,
    slots: usize,
    min_part: usize,
) {
    if slots == 0 {
        if remaining == 0 {
            out.push(ValidMultiset {
                sizes: parts.clone(),
            });
        }
        return;
    }
    // each of the remaining slots needs at least `next`, keeping parts sorted
    let mut next = min_part;
    while next * slots <= remaining {
        parts.push(next);
        extend(out, parts, remaining - next, slots - 1, next);
        parts.pop();
        next += 1;
    }
}
