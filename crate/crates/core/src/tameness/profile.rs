use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::par;

/// Largest `t` for which the profile is enumerated exhaustively.
pub const EXACT_PROFILE_MAX_T: usize = 12;
/// Subsets examined per `t` before switching to sampling.
const EXACT_SUBSET_BUDGET: u128 = 400_000;
const SAMPLES: usize = 4_096;
const SAMPLE_SEED: u64 = 0x5eed_5a17;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub t: usize,
    pub traces: usize,
    /// `false` when `traces` is a sampled lower bound.
    pub exact: bool,
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
        if r > u64::MAX as u128 {
            return u128::MAX;
        }
    }
    r
}

fn trace_count(g: &BipartiteGraph, subset: &[usize]) -> usize {
    let mut traces: Vec<Vec<u64>> = (0..g.m())
        .map(|b| {
            let mut key = vec![0u64; subset.len().div_ceil(64)];
            for (t, &a) in subset.iter().enumerate() {
                if g.has_edge(a, b) {
                    key[t / 64] |= 1 << (t % 64);
                }
            }
            key
        })
        .collect();
    traces.sort_unstable();
    traces.dedup();
    traces.len()
}

/// `π(t)` for `t = 1..=t_max`: the most distinct traces `N(b) ∩ A` over
/// `|A| = t`. Exhaustive while `t <= 12` and the number of `t`-subsets stays
/// within budget; otherwise a seeded sample maximum flagged as inexact.
pub fn shatter_profile(g: &BipartiteGraph, t_max: usize) -> Result<Vec<ProfileEntry>> {
    let n = g.n();
    if t_max > n {
        return Err(Error::Input(format!("t_max = {t_max} exceeds n = {n}")));
    }
    let mut out = Vec::with_capacity(t_max);
    for t in 1..=t_max {
        if t <= EXACT_PROFILE_MAX_T && binomial(n, t) <= EXACT_SUBSET_BUDGET {
            // fan out over the smallest element of the subset
            let best = par::map(n, |first| {
                let mut best = 0;
                let mut idx: Vec<usize> = (first..first + t).collect();
                if *idx.last().unwrap() >= n {
                    return 0;
                }
                loop {
                    best = best.max(trace_count(g, &idx));
                    // next combination with idx[0] fixed
                    let mut k = t;
                    loop {
                        if k == 1 {
                            return best;
                        }
                        k -= 1;
                        if idx[k] < n - (t - k) {
                            idx[k] += 1;
                            for r in k + 1..t {
                                idx[r] = idx[r - 1] + 1;
                            }
                            break;
                        }
                    }
                }
            })
            .into_iter()
            .max()
            .unwrap_or(0);
            out.push(ProfileEntry { t, traces: best, exact: true });
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED ^ t as u64);
            let samples: Vec<Vec<usize>> = (0..SAMPLES)
                .map(|_| {
                    let mut s = index::sample(&mut rng, n, t).into_vec();
                    s.sort_unstable();
                    s
                })
                .collect();
            let best = par::map(samples.len(), |i| trace_count(g, &samples[i]))
                .into_iter()
                .max()
                .unwrap_or(0);
            out.push(ProfileEntry { t, traces: best, exact: false });
        }
    }
    Ok(out)
}
