//! Combinatorial tameness of a bipartite relation: ladder index (order
//! property), VC dimension, Littlestone dimension and the shatter function.
//!
//! All three dimensions are computed by exact branch-and-bound. The search is
//! split at the top level into independent branches that may run in parallel;
//! results are reduced by value and then by branch index, so they do not
//! depend on the worker schedule.

mod ladder;
mod littlestone;
mod profile;
mod vc;

pub use ladder::{ladder_index, ladder_index_with, LadderResult, LadderWitness};
pub use littlestone::{littlestone_dimension, littlestone_dimension_with};
pub use profile::{shatter_profile, ProfileEntry, EXACT_PROFILE_MAX_T};
pub use vc::{vc_dimension, vc_dimension_with, ShatterWitness, TraceSide, VcResult};

use serde::{Deserialize, Serialize};

pub const DEFAULT_LADDER_CAP: usize = 16;
pub const DEFAULT_VC_CAP: usize = 12;
pub const DEFAULT_LITTLESTONE_CAP: usize = 10;
/// Search nodes allowed per top-level branch.
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub cap: usize,
    pub node_budget: u64,
}

impl SearchLimits {
    /// Share of the node budget for each of `branches` independent
    /// top-level branches, so the whole search stays within the budget
    /// whatever the thread count.
    pub(crate) fn branch_budget(&self, branches: usize) -> u64 {
        (self.node_budget / branches.max(1) as u64).max(1)
    }

    pub fn capped(cap: usize) -> Self {
        SearchLimits {
            cap,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// Outcome of a capped dimension search.
///
/// `value` is exact unless `at_cap` (the true value is `>= cap`) or
/// `budget_exhausted` (the true value is `>= value`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dimension {
    pub value: usize,
    pub at_cap: bool,
    pub budget_exhausted: bool,
}

impl Dimension {
    pub fn is_exact(&self) -> bool {
        !self.at_cap && !self.budget_exhausted
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.value)
        } else {
            write!(f, ">= {}", self.value)
        }
    }
}

/// Per-branch search outcome used by the deterministic reduction.
pub(crate) struct Branch<T> {
    pub value: usize,
    pub witness: Option<T>,
    pub exhausted: bool,
    pub hit_ceiling: bool,
}

/// Picks the winning branch: the first one that reached the ceiling if any,
/// otherwise the maximum value with ties to the lowest index. Exhaustion only
/// counts for branches that could still have mattered.
pub(crate) fn reduce_branches<T>(branches: Vec<Branch<T>>, cap: usize) -> (Dimension, Option<T>) {
    let ceiling_at = branches.iter().position(|b| b.hit_ceiling);
    let relevant = ceiling_at.map_or(branches.len(), |i| i + 1);
    let exhausted = branches[..relevant].iter().any(|b| b.exhausted);
    let mut best: Option<Branch<T>> = None;
    for b in branches.into_iter().take(relevant) {
        if best.as_ref().is_none_or(|cur| b.value > cur.value) {
            best = Some(b);
        }
    }
    let (value, witness) = best.map_or((0, None), |b| (b.value, b.witness));
    (
        Dimension {
            value,
            at_cap: value >= cap,
            budget_exhausted: exhausted && value < cap,
        },
        witness,
    )
}

#[inline]
pub(crate) fn floor_log2(x: usize) -> usize {
    if x == 0 {
        0
    } else {
        (usize::BITS - 1 - x.leading_zeros()) as usize
    }
}
