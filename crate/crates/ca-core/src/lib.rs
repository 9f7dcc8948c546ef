//! Exact decision of covering array existence by block juxtaposition.
//!
//! A covering array CA(N; t, k, v) is an N x k array over v symbols in
//! which every t-column subarray contains every t-tuple at least once. A
//! strength-(t+1) array on k+1 columns exists iff v strength-t arrays on k
//! columns can be stacked vertically into a strength-(t+1) array and
//! completed with a constant-per-block column. This crate provides:
//!
//! - array representation, verification, and the stack/split transforms
//!   ([`mod@array`], [`coverage`]);
//! - lexicographic canonical forms under row, column, and per-column symbol
//!   permutations ([`canonical`]);
//! - isomorph-free exhaustive generation of all distinct arrays for a
//!   parameter set, with a brute-force oracle for tiny sizes
//!   ([`generator`]);
//! - covering array number formulas, valid block-size multisets, and the
//!   juxtaposition existence search itself ([`bounds`], [`multiset`],
//!   [`search`]);
//! - text formats for arrays, libraries, and run manifests ([`store`]).
//!
//! Searches are deterministic: results are keyed and ordered by canonical
//! lex vector, so output is identical for any worker count.

pub mod array;
pub mod bounds;
pub mod canonical;
pub mod coverage;
pub mod error;
pub mod generator;
pub mod multiset;
pub mod search;
pub mod store;

pub use array::{
    relabel_column, split_by_last_column, vstack, with_constant_column, BlockSplit, CoveringArray,
    Params, SymbolPermutation,
};
pub use bounds::{can_bound, Bound, BoundKind};
pub use canonical::{
    are_isomorphic, canonical_minimum, is_partial_minimum, lex_compare, lex_vector, CanonicalForm,
    LexVector,
};
pub use coverage::{
    find_uncovered, verify_prefix, verify_strength, CoverageTracker, CoverageWitness, TupleCoverage,
};
pub use error::{CaError, Result};
pub use generator::{
    brute_force_distinct, generate_distinct, Budget, CaLibrary, GenOptions, GenOutcome, GenStats,
    RunControl,
};
pub use multiset::{valid_multisets, ValidMultiset};
pub use search::{
    cak, construct, generate_juxtapositions, JuxtaposeStats, MultisetStats, SearchOptions,
    SearchResultSet, SearchStats,
};
pub use store::{
    ca_to_string, fingerprint, library_to_string, manifest_to_string, parse_ca, parse_library,
    read_ca, read_library, write_ca, write_library, write_manifest, RunManifest, Verdict,
    HASH_ALGORITHM,
};
