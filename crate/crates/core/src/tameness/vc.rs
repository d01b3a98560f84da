use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::graph::BipartiteGraph;
use crate::par::{self, Ceiling};

use super::{floor_log2, reduce_branches, Branch, Dimension, SearchLimits};

/// Which set system is measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceSide {
    /// Neighbourhoods `N(b) ⊆ V` of the `W`-vertices; shattered sets live in `V`.
    ColumnsOnV,
    /// Neighbourhoods `N(a) ⊆ W` of the `V`-vertices (the dual relation).
    RowsOnW,
}

/// `selectors[mask]` is a vertex whose neighbourhood meets `base` in exactly
/// `{ base[t] : bit t of mask }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShatterWitness {
    pub base: Vec<usize>,
    pub selectors: Vec<usize>,
}

impl ShatterWitness {
    /// Recheck against `g` for the given side.
    pub fn check(&self, g: &BipartiteGraph, side: TraceSide) -> bool {
        let d = self.base.len();
        if self.selectors.len() != 1 << d {
            return false;
        }
        let hit = |sel: usize, x: usize| match side {
            TraceSide::ColumnsOnV => g.has_edge(x, sel),
            TraceSide::RowsOnW => g.has_edge(sel, x),
        };
        self.selectors.iter().enumerate().all(|(mask, &sel)| {
            self.base
                .iter()
                .enumerate()
                .all(|(t, &x)| hit(sel, x) == ((mask >> t) & 1 == 1))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VcResult {
    pub dim: Dimension,
    pub witness: Option<ShatterWitness>,
}

pub fn vc_dimension(g: &BipartiteGraph, cap: usize, side: TraceSide) -> VcResult {
    vc_dimension_with(g, SearchLimits::capped(cap), side)
}

/// Largest `d <= cap` such that some `d`-subset of the ground side is
/// shattered by the neighbourhoods of the other side.
///
/// Shattered sets are closed under subsets, so the search only extends sets
/// that are already shattered, in increasing index order. A shattered set `S`
/// splits the family into `2^|S|` trace classes; `S ∪ T` can be shattered only
/// if every class has at least `2^|T|` members, which bounds the remaining
/// depth by `log2` of the smallest class.
pub fn vc_dimension_with(g: &BipartiteGraph, limits: SearchLimits, side: TraceSide) -> VcResult {
    let owned;
    let g = match side {
        TraceSide::ColumnsOnV => g,
        TraceSide::RowsOnW => {
            owned = g.transpose();
            &owned
        }
    };
    // ground = V, family = distinct columns
    let mut seen_cols: HashMap<&BitSet, usize> = HashMap::new();
    let mut family: Vec<usize> = Vec::new();
    for b in 0..g.m() {
        seen_cols.entry(g.col(b)).or_insert_with(|| {
            family.push(b);
            b
        });
    }
    let f = family.len();
    // member[x] = which family sets contain x; identical points are interchangeable
    let mut seen_pts: HashMap<BitSet, ()> = HashMap::new();
    let mut ground: Vec<usize> = Vec::new();
    let mut member: Vec<BitSet> = Vec::new();
    for x in 0..g.n() {
        let mv = BitSet::from_indices(f, (0..f).filter(|&k| g.has_edge(x, family[k])));
        if seen_pts.insert(mv.clone(), ()).is_none() {
            ground.push(x);
            member.push(mv);
        }
    }
    let ceiling = limits.cap.min(floor_log2(f)).min(ground.len());
    if ceiling == 0 {
        let dim = Dimension {
            value: 0,
            at_cap: limits.cap == 0,
            budget_exhausted: false,
        };
        return VcResult { dim, witness: None };
    }
    let marker = Ceiling::new();
    let everything = BitSet::full(f);
    let branches = par::map(ground.len(), |i| {
        let mut s = VcSearch {
            member: &member,
            ceiling,
            budget: limits.branch_budget(ground.len()),
            nodes: 0,
            exhausted: false,
            aborted: false,
            best: 0,
            best_set: Vec::new(),
            marker: &marker,
            branch: i,
        };
        if let Some(classes) = split(std::slice::from_ref(&everything), &member[i]) {
            let cands: Vec<usize> = (i + 1..member.len()).collect();
            s.dfs(&mut vec![i], classes, &cands);
        }
        if s.best >= ceiling && s.best > 0 {
            marker.reached(i);
        }
        Branch {
            value: s.best,
            witness: (s.best > 0).then(|| s.best_set.clone()),
            exhausted: s.exhausted,
            hit_ceiling: s.best >= ceiling && s.best > 0,
        }
    });
    let (dim, set) = reduce_branches(branches, limits.cap);
    let witness = set.map(|s| {
        let base: Vec<usize> = s.iter().map(|&k| ground[k]).collect();
        let mut selectors = vec![usize::MAX; 1 << base.len()];
        for b in (0..g.m()).rev() {
            let mask = base
                .iter()
                .enumerate()
                .filter(|(_, &x)| g.has_edge(x, b))
                .fold(0usize, |acc, (t, _)| acc | 1 << t);
            selectors[mask] = b;
        }
        debug_assert!(selectors.iter().all(|&b| b != usize::MAX));
        ShatterWitness { base, selectors }
    });
    VcResult { dim, witness }
}

/// Refine trace classes by membership of one more point; `None` if some class
/// fails to split.
fn split(classes: &[BitSet], member: &BitSet) -> Option<Vec<BitSet>> {
    let mut out = Vec::with_capacity(classes.len() * 2);
    for c in classes {
        let inside = c.and(member);
        if inside.is_empty() {
            return None;
        }
        let outside = c.and_not(member);
        if outside.is_empty() {
            return None;
        }
        out.push(inside);
        out.push(outside);
    }
    Some(out)
}

struct VcSearch<'a> {
    member: &'a [BitSet],
    ceiling: usize,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    aborted: bool,
    best: usize,
    best_set: Vec<usize>,
    marker: &'a Ceiling,
    branch: usize,
}

impl VcSearch<'_> {
    /// `cands` are the points after `set.last()` that extend `set` alone;
    /// only they can appear in a larger shattered superset. Every attempted
    /// split counts against the budget.
    fn dfs(&mut self, set: &mut Vec<usize>, classes: Vec<BitSet>, cands: &[usize]) {
        if set.len() > self.best {
            self.best = set.len();
            self.best_set = set.clone();
        }
        if self.best >= self.ceiling || self.exhausted || self.aborted {
            return;
        }
        let before = self.nodes;
        self.nodes += 1 + cands.len() as u64;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if self.nodes / 1024 != before / 1024 && self.marker.superseded(self.branch) {
            self.aborted = true;
            return;
        }
        let smallest = classes.iter().map(BitSet::count).min().unwrap_or(0);
        if set.len() + floor_log2(smallest).min(cands.len()) <= self.best {
            return;
        }
        let extensions: Vec<(usize, Vec<BitSet>)> = cands
            .iter()
            .filter_map(|&x| split(&classes, &self.member[x]).map(|c| (x, c)))
            .collect();
        let room = floor_log2(smallest).min(extensions.len());
        if set.len() + room <= self.best {
            return;
        }
        let xs: Vec<usize> = extensions.iter().map(|e| e.0).collect();
        let total = extensions.len();
        for (k, (x, child)) in extensions.into_iter().enumerate() {
            if set.len() + (total - k).min(room) <= self.best {
                return;
            }
            set.push(x);
            self.dfs(set, child, &xs[k + 1..]);
            set.pop();
            if self.best >= self.ceiling || self.exhausted || self.aborted {
                return;
            }
        }
    }
}
