//! Regularity partitions of `V` and `W`.
//!
//! Three engines, one per tameness regime. Each returns a [`BiPartition`]
//! that the checks in [`crate::verify`] accept; the stable and distal engines
//! verify their output before returning it.

mod bipartition;
mod distal;
mod nip;
mod stable;

pub use bipartition::{refine_common, BiPartition, Mode, Provenance};
pub use distal::distal_partition;
pub use nip::{nip_partition, NipOptions};
pub use stable::{stable_partition, StableOptions};
