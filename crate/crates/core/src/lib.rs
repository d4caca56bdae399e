//! Rate-adaptive LDPC codes for source coding with side information at the
//! decoder.
//!
//! The crate designs a mother code from an optimized protograph, derives a
//! nested family of lower-rate codes by merging check rows under protograph
//! control while avoiding short cycles, and evaluates the family against the
//! accumulated-syndrome (LDPCA) baseline by Monte Carlo simulation.

pub mod codec;
pub mod error;
pub mod gf2;
pub mod par;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
pub use gf2::{BinaryMatrix, BitVector};
pub mod graph;
pub mod ladder;
pub mod protograph;
