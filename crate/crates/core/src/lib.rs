//! Heavy-subgraph Hamiltonicity conditions for 2-connected graphs:
//! predicate engine, exact cycle solvers, and an exhaustive verification
//! harness over all small graphs.

pub mod composed;
pub mod gen;
pub mod hamilton;
pub mod ocycle;
pub mod heavy;
pub mod graph;
pub mod graph6;
pub mod harness;
pub mod par;
pub mod patterns;

pub use graph::{Cycle, Graph, Path, VertexSet};
