//! Tameness invariants and regularity partitions for finite bipartite graphs.
//!
//! The crate measures how far a relation `R ⊆ V × W` is from encoding a
//! linear order (ladder index), from shattering sets (VC and Littlestone
//! dimension), and builds partitions of `V` and `W` in which almost every
//! pair of parts is homogeneous or close to it. All arithmetic that decides a
//! verdict is exact.

pub mod bits;
pub mod error;
pub mod graph;
pub mod measures;
pub mod par;
pub mod partition;
pub mod ratio;
mod scaled;
pub mod tameness;
pub mod verify;

pub use bits::BitSet;
pub use error::{Error, Result};
pub use graph::{BipartiteGraph, Side};
pub use ratio::Rational;
