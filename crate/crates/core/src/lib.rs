//! Hierarchical destroy-and-repair solver for large Euclidean TSP instances.
//!
//! The solver improves an incumbent tour by repeatedly deleting a bounded set
//! of edges around a rarely-visited vertex, solving the resulting compressed
//! sub-problem and splicing the result back in. Independently obtained local
//! optima are intersected; their common edges are permanently fixed and the
//! instance is compressed around them, recursively, until the remaining core
//! is small enough to solve directly.

pub mod destroy;
pub mod error;
pub mod exact;
pub mod grid;
pub mod hierarchy;
pub mod init;
pub mod io;
pub mod model;
pub mod repair;
pub mod rng;
pub mod units;

pub use error::{Error, Result};
pub use hierarchy::{hdr_solve, RunStats, SolverConfig};
pub use model::{validate_tour, Edge, Instance, Metric, Tour, VertexId};
