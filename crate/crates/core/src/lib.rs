//! Exact inversion numbers of oriented graphs.
//!
//! Two independent engines compute the minimum number of subset inversions
//! needed to make an oriented graph acyclic: a breadth-first search over
//! orientation states, and a rank-minimization engine over the two-element
//! field that goes through disagreement graphs with transitive tournaments.
//! Both produce certificates (decycling families) that are re-verified
//! before they are reported. On top of the engines sit named verification
//! suites and search drivers for small-instance experiments.

pub mod complement;
pub mod digraph;
pub mod error;
pub mod format;
pub mod gf2;
pub mod graph;
pub mod inversion;
pub mod pairs;
pub mod sample;
pub mod verify;

mod shard;

pub use error::{Error, Result};
