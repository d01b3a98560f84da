#![allow(dead_code)]

use proptest::prelude::*;
use tamereg::BipartiteGraph;

/// Graphs with `1..=max_n` rows and `1..=max_m` columns, any edge set.
pub fn graph(max_n: usize, max_m: usize) -> impl Strategy<Value = BipartiteGraph> {
    (1..=max_n, 1..=max_m).prop_flat_map(|(n, m)| {
        proptest::collection::vec(any::<bool>(), n * m).prop_map(move |bits| {
            let edges: Vec<(usize, usize)> = (0..n * m).filter(|&k| bits[k]).map(|k| (k / m, k % m)).collect();
            BipartiteGraph::build(n, m, &edges).unwrap()
        })
    })
}

/// A graph together with permutations of both sides.
pub fn graph_with_perms(max_n: usize, max_m: usize) -> impl Strategy<Value = (BipartiteGraph, Vec<usize>, Vec<usize>)> {
    graph(max_n, max_m).prop_flat_map(|g| {
        let pv = Just((0..g.n()).collect::<Vec<_>>()).prop_shuffle();
        let pw = Just((0..g.m()).collect::<Vec<_>>()).prop_shuffle();
        (Just(g), pv, pw)
    })
}

/// Ladder index by trying every extension of every partial ladder.
pub fn naive_ladder(g: &BipartiteGraph) -> usize {
    fn grow(g: &BipartiteGraph, a: &mut Vec<usize>, b: &mut Vec<usize>) -> usize {
        let mut best = a.len();
        for x in 0..g.n() {
            for y in 0..g.m() {
                if g.has_edge(x, y) && b.iter().all(|&bj| !g.has_edge(x, bj)) && a.iter().all(|&ai| g.has_edge(ai, y)) {
                    a.push(x);
                    b.push(y);
                    best = best.max(grow(g, a, b));
                    a.pop();
                    b.pop();
                }
            }
        }
        best
    }
    grow(g, &mut Vec::new(), &mut Vec::new())
}

/// Largest subset of `V` on which the columns cut out every subset.
pub fn naive_vc(g: &BipartiteGraph) -> usize {
    let cols: Vec<u32> = (0..g.m())
        .map(|b| (0..g.n()).filter(|&a| g.has_edge(a, b)).fold(0, |m, a| m | 1 << a))
        .collect();
    (0u32..1 << g.n())
        .filter(|&s| {
            let mut t: Vec<u32> = cols.iter().map(|c| c & s).collect();
            t.sort_unstable();
            t.dedup();
            t.len() == 1 << s.count_ones()
        })
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Littlestone dimension of the rows, as functions on `W`.
pub fn naive_ld(g: &BipartiteGraph) -> usize {
    fn ld(g: &BipartiteGraph, h: u32) -> usize {
        if h.count_ones() <= 1 {
            return 0;
        }
        (0..g.m())
            .filter_map(|b| {
                let ones = (0..g.n()).filter(|&a| h >> a & 1 == 1 && g.has_edge(a, b)).fold(0u32, |m, a| m | 1 << a);
                let zeros = h & !ones;
                (ones != 0 && zeros != 0).then(|| 1 + ld(g, ones).min(ld(g, zeros)))
            })
            .max()
            .unwrap_or(0)
    }
    ld(g, (1u32 << g.n()) - 1)
}
