//! Exact-weight constraint satisfaction over finite Boolean constraint
//! families: given a formula and a target weight k, decide whether some
//! assignment with exactly k ones satisfies every constraint.
//!
//! The crate classifies a constraint family into one of four solving
//! regimes and ships a solver per regime, the reductions connecting them
//! (implication digraphs with exact-weight closed sets, clique and
//! hyperclique search), instance generators, and text formats for all
//! object kinds.

pub mod bits;
pub mod boolfun;
pub mod clique;
pub mod clique_reduce;
pub mod formula;
pub mod gen;
pub mod impl_reduce;
pub mod solver;
pub mod wdi;
pub mod error;

pub use error::{Error, Result};
