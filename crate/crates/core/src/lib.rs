//! Normal entry patterns.
//!
//! An entry pattern is an `n × n` matrix of indeterminates, some of which may
//! repeat; it is normal when every real specialization `M` satisfies
//! `MMᵀ = MᵀM`. This crate builds, tests, canonicalizes, classifies and
//! exhaustively searches such patterns. The searches verify at small orders
//! that a nonsymmetric normal pattern of order `n ≥ 3` has at most
//! `n(n−3)/2 + 3` distinct indeterminates, with a single extremal pattern up
//! to permutation similarity.

pub mod binary;
pub mod canon;
pub mod classify;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod format;
pub mod normality;
pub mod pattern;
pub mod search;

pub use binary::{BinaryMatrix, RowColProfile};
pub use canon::{are_equivalent, canonical_key, CanonicalKey, SimilarityClass};
pub use error::{Error, Result};
pub use pattern::Pattern;

/// `n(n−3)/2 + 3`, the largest class count of a nonsymmetric normal pattern of
/// order `n ≥ 3`. Evaluates the same expression for smaller `n` (2 at `n = 2`).
pub fn max_nonsymmetric_classes(n: usize) -> usize {
    (n * n + 6 - 3 * n) / 2
}
