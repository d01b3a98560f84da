use std::collections::HashMap;

use crate::bits::BitSet;
use crate::graph::BipartiteGraph;
use crate::par::{self, Ceiling};

use super::{floor_log2, reduce_branches, Branch, Dimension, SearchLimits};

pub fn littlestone_dimension(g: &BipartiteGraph, cap: usize) -> Dimension {
    littlestone_dimension_with(g, SearchLimits::capped(cap))
}

/// Depth of the deepest complete binary tree labelled by `W`-vertices whose
/// every root-to-leaf sign pattern is realised by some `a ∈ V`, capped at
/// `cap`.
///
/// Works on the version space `S ⊆ V` (distinct rows only):
/// `ld(S) = max_b 1 + min(ld(S ∩ N(b)), ld(S ∖ N(b)))` over splitting `b`,
/// with `ld(S) <= log2 |S|` as the bound and results memoized per `S`.
pub fn littlestone_dimension_with(g: &BipartiteGraph, limits: SearchLimits) -> Dimension {
    let mut seen: HashMap<&BitSet, ()> = HashMap::new();
    let reps: Vec<usize> = (0..g.n())
        .filter(|&a| seen.insert(g.row(a), ()).is_none())
        .collect();
    let h = reps.len();
    // columns restricted to the distinct rows, deduplicated
    let mut seen_cols: HashMap<BitSet, ()> = HashMap::new();
    let splitters: Vec<BitSet> = (0..g.m())
        .map(|b| BitSet::from_indices(h, (0..h).filter(|&k| g.has_edge(reps[k], b))))
        .filter(|c| !c.is_empty() && c.count() < h)
        .filter(|c| seen_cols.insert(c.clone(), ()).is_none())
        .collect();
    let ceiling = limits.cap.min(floor_log2(h));
    if ceiling == 0 || splitters.is_empty() {
        return Dimension {
            value: 0,
            at_cap: limits.cap == 0,
            budget_exhausted: false,
        };
    }
    let all = BitSet::full(h);
    let marker = Ceiling::new();
    let branches = par::map(splitters.len(), |i| {
        let mut s = LdSearch {
            splitters: &splitters,
            budget: limits.branch_budget(splitters.len()),
            nodes: 0,
            exhausted: false,
            aborted: false,
            memo: HashMap::new(),
            marker: &marker,
            branch: i,
        };
        let inside = all.and(&splitters[i]);
        let outside = all.and_not(&splitters[i]);
        let sub = ceiling - 1;
        let left = s.rank(&inside, sub);
        let right = if left == 0 { 0 } else { s.rank(&outside, left) };
        let value = 1 + left.min(right);
        if value >= ceiling {
            marker.reached(i);
        }
        Branch::<()> {
            value,
            witness: None,
            exhausted: s.exhausted,
            hit_ceiling: value >= ceiling,
        }
    });
    reduce_branches(branches, limits.cap).0
}

struct LdSearch<'a> {
    splitters: &'a [BitSet],
    budget: u64,
    nodes: u64,
    exhausted: bool,
    aborted: bool,
    /// set -> (value, limit it was computed under)
    memo: HashMap<BitSet, (usize, usize)>,
    marker: &'a Ceiling,
    branch: usize,
}

impl LdSearch<'_> {
    /// `min(ld(set), limit)` for nonempty `set`.
    fn rank(&mut self, set: &BitSet, limit: usize) -> usize {
        let size = set.count();
        let limit = limit.min(floor_log2(size));
        if limit == 0 {
            return 0;
        }
        if let Some(&(v, lim)) = self.memo.get(set) {
            if v < lim || limit <= lim {
                return v.min(limit);
            }
        }
        if self.exhausted || self.aborted {
            return 0;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return 0;
        }
        if self.nodes.is_multiple_of(1024) && self.marker.superseded(self.branch) {
            self.aborted = true;
            return 0;
        }
        let mut best = 0;
        for c in self.splitters {
            let k = set.intersection_count(c);
            if k == 0 || k == size {
                continue;
            }
            // 1 + min(ld(in), ld(out)) <= 1 + log2(min side)
            if floor_log2(k.min(size - k)) < best {
                continue;
            }
            let inside = set.and(c);
            let outside = set.and_not(c);
            let (small, large) = if k <= size - k {
                (inside, outside)
            } else {
                (outside, inside)
            };
            let a = self.rank(&small, limit - 1);
            if a < best {
                continue;
            }
            let b = self.rank(&large, a);
            best = best.max(1 + a.min(b));
            if best >= limit || self.exhausted || self.aborted {
                break;
            }
        }
        if !self.exhausted && !self.aborted {
            self.memo.insert(set.clone(), (best, limit));
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};

    #[test]
    fn empty_graph_is_zero() {
        assert_eq!(littlestone_dimension(&BipartiteGraph::empty(4, 4), 10).value, 0);
    }

    #[test]
    fn h2_is_one() {
        let g = generate(&Family::Half { k: 2 }).unwrap();
        let d = littlestone_dimension(&g, 10);
        assert_eq!(d.value, 1);
        assert!(d.is_exact());
    }

    #[test]
    fn parity_two_is_two() {
        let g = generate(&Family::Parity { d: 2 }).unwrap();
        assert_eq!(littlestone_dimension(&g, 10).value, 2);
    }

    #[test]
    fn half_graph_grows_logarithmically() {
        // thresholds on a line: binary search depth
        for (k, want) in [(3, 1), (4, 2), (7, 2), (8, 3)] {
            let g = generate(&Family::Half { k }).unwrap();
            assert_eq!(littlestone_dimension(&g, 10).value, want, "H_{k}");
        }
    }

    #[test]
    fn cap_applies() {
        let g = generate(&Family::Parity { d: 3 }).unwrap();
        let d = littlestone_dimension(&g, 2);
        assert_eq!(d.value, 2);
        assert!(d.at_cap);
    }
}
