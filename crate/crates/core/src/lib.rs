//! Exact enumeration of k-bounded anchored permutations.
//!
//! A permutation of `1..=n` is *k-bounded* when consecutive entries differ by
//! at most `k`, and *anchored* when it starts at 1 and ends at `n`. This crate
//! counts and generates such permutations through several independent
//! engines that are meant to be checked against one another:
//!
//! * [`enumerate`]: lexicographic backtracking, the ground-truth oracle.
//! * [`closed_form`]: constant-state recurrences for `k <= 3` and their
//!   rational generating functions.
//! * [`frontier`]: a connectivity-profile sweep over the value axis that
//!   counts for any fixed `k` in time linear in `n`.
//! * [`seqmine`]: exact discovery of linear recurrences from count tables.
//! * [`structure`]: executable forms of the structural decompositions for
//!   `k = 2` and `k = 3`.
//! * [`oeis`]: b-file parsing, a caching fetch client and table comparison.

pub mod closed_form;
pub mod enumerate;
mod error;
pub mod frontier;
pub mod oeis;
pub mod perm;
pub mod seqmine;
pub mod structure;
pub mod verify;

pub use closed_form::{Poly, RationalGF, Recurrence};
pub use error::{Error, Result};
pub use perm::{Count, CountTable, GapSpec, Permutation, Provenance, Variant};
