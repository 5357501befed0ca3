//! Avoiding words and reset words for complete deterministic finite automata.
//!
//! The crate is built around a few small value types ([`Automaton`],
//! [`StateSet`], [`Word`]) and the machinery layered on top of them:
//!
//! * [`automaton`] — transition tables, word actions, images/preimages,
//!   structural classification;
//! * [`linalg`] — exact integer count vectors and an incremental echelon
//!   basis (no floating point anywhere in this crate);
//! * [`avoiding`] — constructions producing words whose image misses a
//!   requested state (or subset), or compresses the carrier set;
//! * [`compression`] — pair-automaton BFS, greedy compression and the
//!   cumulative bound `C(j,i)`;
//! * [`pipeline`] — the combined avoid/compress reset-word construction
//!   with an exact per-instance length certificate;
//! * [`oracle`] — exponential but exact breadth-first baselines used to
//!   verify everything at small sizes;
//! * [`generators`] — deterministic automaton sources for tests and
//!   experiments.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats on disk and the
//! command-line front end live in the companion `synchro-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod automaton;
pub mod avoiding;
pub mod compression;
mod error;
pub mod generators;
pub mod linalg;
pub mod oracle;
pub mod pipeline;
pub mod stateset;
pub mod word;

pub use automaton::{Automaton, ClassificationReport, PreimageCensus, Transform};
pub use error::Error;
pub use stateset::{StateSet, MAX_STATES};
pub use word::Word;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
