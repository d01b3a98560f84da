use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::graph::BipartiteGraph;
use crate::par::{self, Ceiling};

use super::{reduce_branches, Branch, Dimension, SearchLimits};

/// `a_seq[i]`, `b_seq[j]` with `R(a_i, b_j)` iff `i <= j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderWitness {
    pub a_seq: Vec<usize>,
    pub b_seq: Vec<usize>,
}

impl LadderWitness {
    pub fn height(&self) -> usize {
        self.a_seq.len()
    }

    /// Bit-exact recheck against `g`.
    pub fn check(&self, g: &BipartiteGraph) -> bool {
        self.a_seq.len() == self.b_seq.len()
            && self.a_seq.iter().all(|&a| a < g.n())
            && self.b_seq.iter().all(|&b| b < g.m())
            && self.a_seq.iter().enumerate().all(|(i, &a)| {
                self.b_seq
                    .iter()
                    .enumerate()
                    .all(|(j, &b)| g.has_edge(a, b) == (i <= j))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderResult {
    pub dim: Dimension,
    pub witness: Option<LadderWitness>,
}

pub fn ladder_index(g: &BipartiteGraph, cap: usize) -> LadderResult {
    ladder_index_with(g, SearchLimits::capped(cap))
}

/// Largest `k <= cap` such that `g` contains a ladder of height `k`.
///
/// A ladder is grown one rung at a time. With rungs `(a_1, b_1) .. (a_t, b_t)`
/// placed, the next `a` must avoid every earlier `b` and the next `b` must be
/// adjacent to every earlier `a`; those two candidate sets are the whole
/// search state, so states are memoized and the remaining height is bounded by
/// the smaller candidate set.
pub fn ladder_index_with(g: &BipartiteGraph, limits: SearchLimits) -> LadderResult {
    assert!(limits.cap >= 1, "ladder cap must be at least 1");
    let ceiling = limits.cap.min(g.n()).min(g.m());
    let starts: Vec<usize> = (0..g.n()).filter(|&a| !g.row(a).is_empty()).collect();
    let marker = Ceiling::new();
    let branches = par::map(starts.len(), |i| {
        let mut s = LadderSearch {
            g,
            ceiling,
            budget: limits.branch_budget(starts.len()),
            nodes: 0,
            exhausted: false,
            aborted: false,
            best: 0,
            best_path: Vec::new(),
            path: Vec::new(),
            memo: HashMap::new(),
            marker: &marker,
            branch: i,
        };
        let a = starts[i];
        let all_a = BitSet::full(g.n());
        let all_b = BitSet::full(g.m());
        for b in g.row(a).iter() {
            s.path.push((a, b));
            let next_a = all_a.and_not(g.col(b));
            let next_b = all_b.and(g.row(a));
            s.dfs(next_a, next_b);
            s.path.pop();
            if s.best >= ceiling || s.exhausted || s.aborted {
                break;
            }
        }
        if s.best >= ceiling {
            marker.reached(i);
        }
        Branch {
            value: s.best,
            witness: (s.best > 0).then(|| LadderWitness {
                a_seq: s.best_path.iter().map(|p| p.0).collect(),
                b_seq: s.best_path.iter().map(|p| p.1).collect(),
            }),
            exhausted: s.exhausted,
            hit_ceiling: s.best >= ceiling,
        }
    });
    let (dim, witness) = reduce_branches(branches, limits.cap);
    LadderResult { dim, witness }
}

struct LadderSearch<'a> {
    g: &'a BipartiteGraph,
    ceiling: usize,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    aborted: bool,
    best: usize,
    best_path: Vec<(usize, usize)>,
    path: Vec<(usize, usize)>,
    memo: HashMap<(BitSet, BitSet), usize>,
    marker: &'a Ceiling,
    branch: usize,
}

impl LadderSearch<'_> {
    fn dfs(&mut self, cand_a: BitSet, cand_b: BitSet) {
        let depth = self.path.len();
        if depth > self.best {
            self.best = depth;
            self.best_path = self.path.clone();
        }
        if self.best >= self.ceiling || self.exhausted || self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if self.nodes.is_multiple_of(1024) && self.marker.superseded(self.branch) {
            self.aborted = true;
            return;
        }
        let g = self.g;
        // an `a` needs some `b` left to pair with, and vice versa
        let cand_a = BitSet::from_indices(
            g.n(),
            cand_a.iter().filter(|&a| g.row(a).intersects(&cand_b)),
        );
        let cand_b = BitSet::from_indices(
            g.m(),
            cand_b.iter().filter(|&b| g.col(b).intersects(&cand_a)),
        );
        let room = cand_a.count().min(cand_b.count());
        if depth + room <= self.best {
            return;
        }
        match self.memo.get(&(cand_a.clone(), cand_b.clone())) {
            Some(&seen) if seen >= depth => return,
            _ => {}
        }
        self.memo.insert((cand_a.clone(), cand_b.clone()), depth);

        for a in cand_a.iter() {
            let bs = g.row(a).and(&cand_b);
            for b in bs.iter() {
                self.path.push((a, b));
                let next_a = cand_a.and_not(g.col(b));
                let next_b = cand_b.and(g.row(a));
                self.dfs(next_a, next_b);
                self.path.pop();
                if self.best >= self.ceiling || self.exhausted || self.aborted {
                    return;
                }
                if depth + room <= self.best {
                    return;
                }
            }
        }
    }
}
