//! Independent checking of regularity claims.
//!
//! Nothing here trusts the engine that produced a partition: every density
//! and mass is recomputed from the graph and the measures with exact integer
//! arithmetic. The stable check uses `<=` per column, the NIP and distal
//! checks use `<` per pair and for the exceptional mass.

mod brute;
mod checks;
mod report;

pub use brute::{
    brute_force_optimal, partition_count, BruteForceResult, BRUTE_MAX_PARTITIONS, BRUTE_MAX_SIDE,
};
pub use checks::{check, check_distal, check_nip, check_stable, density_matrix};
pub(crate) use checks::classify;
pub use report::{ClassCounts, PairClass, RegularityReport, Witness, GRID_LIMIT};
