//! Combinatorics of distinct squares in finite words.
//!
//! The crate builds the objects used to bound the number of distinct squares
//! in a word: Lyndon roots, the conjugacy powers `[z]_m`, Rauzy graphs of every
//! order, the circuit families `CS_w(z)` and their cycle-vectors. On top of
//! those it offers a per-word verifier for the known square bounds and an
//! exhaustive census of the maximum number of distinct squares.

pub mod census;
pub mod conjecture;
pub mod dot;
mod error;
pub mod rank;
pub mod rauzy;
pub mod squares;
pub mod verifier;
mod word;
pub mod words;

pub use error::{Error, Result};
pub use word::{shortlex, Word};
pub use words::{ConjPowerSet, LyndonRoot};
