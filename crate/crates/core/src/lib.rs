//! Computational small cancellation theory over free products `A * B`.
//!
//! The crate certifies metric small cancellation conditions, solves the word
//! problem in `C'(1/6)` quotients with Dehn's algorithm, computes truncated
//! taut loop length spectra of graphs, builds balls of the coned-off Cayley
//! complex, evaluates dimension formulas for small cancellation products, and
//! checks one-endedness criteria.

pub mod cancellation;
pub mod coned;
pub mod corpus;
pub mod dehn;
pub mod dims;
pub mod ends;
pub mod error;
pub mod fp_words;
pub mod kv;
pub mod quotient;
pub mod report;
pub mod sample;
pub mod taut;

pub use error::{Error, Result};
