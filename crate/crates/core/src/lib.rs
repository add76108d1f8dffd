//! Weak saturation numbers of (multi)graphs and uniform hypergraphs.
//!
//! The crate computes F-bootstrap percolation closures, exact weak saturation
//! numbers at small scale, and matroid lower bounds: if every copy of every
//! pattern is a cycle of a matroid on the host's edge instances, the rank of
//! the host is a lower bound on the minimum seed.

pub mod combinatorics;
pub mod count_matroid;
pub mod embedding;
pub mod error;
pub mod experiments;
pub mod field;
pub mod hyper_tools;
pub mod hypergraph;
pub mod io;
pub mod lift;
pub mod linear_matroid;
pub mod matroid;
pub mod patterns;
pub mod percolation;
pub mod solver;

pub use embedding::{enumerate_copies, exists_copy_through, Embedding};
pub use error::{Error, Result};
pub use hypergraph::{Edge, EdgeInstance, PatternFamily, UniformHypergraph, Vertex};
