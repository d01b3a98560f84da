//! Finite probability measures on one side of a graph, their atomic
//! decomposition over a parameter set, and domination of target sets by types.

mod atoms;
mod domination;
mod expr;
mod measure;

pub use atoms::{decompose, type_partition, AtomSummary, TypeAtom, WeightedAtom};
pub use domination::{
    dominate_generic, dominate_smooth, AtomReport, AtomVerdict, DominationMode, DominationReport,
};
pub use expr::Expr;
pub use measure::WeightedMeasure;
