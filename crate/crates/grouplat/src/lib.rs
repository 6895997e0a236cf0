//! Solvers for non-commutative analogues of the classical lattice problems,
//! over free groups and finitely generated nilpotent groups:
//!
//! * closest subgroup element and shortest nontrivial subgroup element,
//!   via Stallings graphs ([`graph`]) or Malcev normal forms ([`nilpotent`]);
//! * distances between subgroups, cosets and rational subsets of a free
//!   group, via product automata ([`rational`]);
//! * geodesics of a subgroup element in given subgroup generators, via a
//!   completed bouquet graph with straight-line-program edge labels
//!   ([`geodesic`], [`slp`]);
//! * exponential-time brute-force references for all of the above
//!   ([`oracles`]), wired into the test suite and the CLI.
//!
//! The `grouplat` binary reads JSON task files; see [`task`].

pub mod geodesic;
pub mod graph;
pub mod nilpotent;
pub mod oracles;
pub mod rational;
pub mod slp;
pub mod task;
mod union_find;
pub mod words;

use num_bigint::BigUint;

pub use graph::{FoldedGraph, LabeledGraph};
pub use words::{Alphabet, Letter, Word};

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed exponent in token `{0}`")]
    MalformedExponent(String),
    #[error("letter index {index} out of range for alphabet of rank {rank}")]
    LetterOutOfRange { index: usize, rank: usize },
    #[error("words belong to different alphabets")]
    AlphabetMismatch,
    #[error("straight-line program refs belong to different arenas")]
    ArenaMismatch,
    #[error("expansion length {length} exceeds budget {budget}")]
    BudgetExceeded { length: BigUint, budget: usize },
    #[error("subgroup generator {0} is trivial after free reduction")]
    TrivialGenerator(usize),
    #[error("word is not an element of the subgroup")]
    NotInSubgroup,
    #[error("acceptor language is empty")]
    EmptyLanguage,
    #[error("acceptor is nondeterministic at state {state} on `{letter}`")]
    Nondeterministic { state: usize, letter: String },
    #[error("acceptor accepts a non-reduced word")]
    UnreducedLanguage,
    #[error("invalid acceptor: {0}")]
    InvalidAcceptor(String),
    #[error("both subgroups are trivial")]
    BothTrivial,
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("generator and exponent lists have different lengths")]
    LengthMismatch,
}

impl Error {
    /// True for errors caused by unparseable input rather than by a
    /// violated precondition; the CLI maps the two classes to different
    /// exit codes.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidAlphabet(_)
                | Error::UnknownGenerator(_)
                | Error::MalformedExponent(_)
                | Error::LetterOutOfRange { .. }
                | Error::InvalidAcceptor(_)
                | Error::InvalidPresentation(_)
        )
    }
}

#[cfg(test)]
mod concurrency {
    //! The shared values are immutable after construction and safe to
    //! hand across threads; keep that statically checked.

    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn shared_types_are_send_and_sync() {
        assert_send_sync::<crate::words::Alphabet>();
        assert_send_sync::<crate::words::Word>();
        assert_send_sync::<crate::graph::FoldedGraph>();
        assert_send_sync::<crate::rational::ReducedAcceptor>();
        assert_send_sync::<crate::slp::SlpArena>();
        assert_send_sync::<crate::geodesic::BouquetGraph>();
        assert_send_sync::<crate::nilpotent::NilpotentPresentation>();
        assert_send_sync::<crate::nilpotent::MalcevVector>();
    }
}
