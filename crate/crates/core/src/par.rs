//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature these fan out over rayon's pool; without it they
//! are plain loops. Both paths return identical results: maps preserve index
//! order and reductions break ties by the smallest index.

use std::sync::atomic::{AtomicUsize, Ordering};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `(0..n).map(f).collect()`, index order preserved.
pub fn map<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Maximum of `f(i)` over `0..n`; ties go to the smallest `i`.
pub fn argmax<K, T, F>(n: usize, f: F) -> Option<(usize, K, T)>
where
    K: Ord + Send,
    T: Send,
    F: Fn(usize) -> Option<(K, T)> + Sync + Send,
{
    let better = |a: Option<(usize, K, T)>, b: Option<(usize, K, T)>| match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                Some(b)
            } else {
                Some(a)
            }
        }
    };
    #[cfg(feature = "parallel")]
    {
        (0..n)
            .into_par_iter()
            .map(|i| f(i).map(|(k, t)| (i, k, t)))
            .reduce(|| None, better)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n)
            .map(|i| f(i).map(|(k, t)| (i, k, t)))
            .fold(None, better)
    }
}

/// Shared "a branch with a smaller index already reached the ceiling" marker.
///
/// Branch `i` may abandon its work once some branch `j < i` has reached the
/// global upper bound: whatever `i` finds cannot win the smallest-index tie
/// break. Branches below the marker never stop early, so the reduction result
/// does not depend on scheduling.
pub struct Ceiling(AtomicUsize);

impl Ceiling {
    pub fn new() -> Self {
        Ceiling(AtomicUsize::new(usize::MAX))
    }

    pub fn reached(&self, branch: usize) {
        self.0.fetch_min(branch, Ordering::Relaxed);
    }

    #[inline]
    pub fn superseded(&self, branch: usize) -> bool {
        self.0.load(Ordering::Relaxed) < branch
    }
}

impl Default for Ceiling {
    fn default() -> Self {
        Self::new()
    }
}
