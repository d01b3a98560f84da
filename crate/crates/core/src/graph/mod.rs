//! Finite bipartite graphs `(V, W, R)` stored as packed adjacency rows.

mod generate;
mod interval;
mod io;

pub use generate::{generate, Family};
pub use interval::{Interval, IntervalPresentation};
pub use io::{format_graph, parse_graph, read_graph, write_graph, GraphFormat};

use std::fmt;
use std::sync::OnceLock;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::ratio::{self, Rational};

/// Which vertex class a set, measure or trace lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Side {
    V,
    W,
}

/// A bipartite relation `R ⊆ V × W` with `V = 0..n`, `W = 0..m`.
///
/// Row `a` holds bit `b` iff `R(a, b)`. Columns are derived from the rows on
/// first use and cached; the graph is immutable afterwards, so it can be
/// shared freely across worker threads.
#[derive(Clone)]
pub struct BipartiteGraph {
    n: usize,
    m: usize,
    rows: Vec<BitSet>,
    cols: OnceLock<Vec<BitSet>>,
    presentation: Option<IntervalPresentation>,
}

impl BipartiteGraph {
    pub fn empty(n: usize, m: usize) -> Self {
        Self::from_rows_unchecked(m, vec![BitSet::new(m); n])
    }

    pub fn complete(n: usize, m: usize) -> Self {
        Self::from_rows_unchecked(m, vec![BitSet::full(m); n])
    }

    /// Graph on `n × m` with exactly the listed edges. Duplicates are harmless.
    pub fn build(n: usize, m: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut rows = vec![BitSet::new(m); n];
        for &(a, b) in edges {
            if a >= n || b >= m {
                return Err(Error::EdgeOutOfRange(a, b, n, m));
            }
            rows[a].insert(b);
        }
        Ok(Self::from_rows_unchecked(m, rows))
    }

    pub fn from_rows(m: usize, rows: Vec<BitSet>) -> Result<Self> {
        if let Some((a, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
            return Err(Error::Input(format!(
                "row {a} has length {}, expected {m}",
                r.len()
            )));
        }
        Ok(Self::from_rows_unchecked(m, rows))
    }

    pub(crate) fn from_rows_unchecked(m: usize, rows: Vec<BitSet>) -> Self {
        BipartiteGraph {
            n: rows.len(),
            m,
            rows,
            cols: OnceLock::new(),
            presentation: None,
        }
    }

    pub(crate) fn with_presentation(mut self, p: IntervalPresentation) -> Self {
        self.presentation = Some(p);
        self
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn side_len(&self, side: Side) -> usize {
        match side {
            Side::V => self.n,
            Side::W => self.m,
        }
    }

    #[inline]
    pub fn row(&self, a: usize) -> &BitSet {
        &self.rows[a]
    }

    pub fn rows(&self) -> &[BitSet] {
        &self.rows
    }

    /// `N(b) ⊆ V`.
    #[inline]
    pub fn col(&self, b: usize) -> &BitSet {
        &self.cols()[b]
    }

    pub fn cols(&self) -> &[BitSet] {
        self.cols.get_or_init(|| {
            let mut cols = vec![BitSet::new(self.n); self.m];
            for (a, row) in self.rows.iter().enumerate() {
                for b in row.iter() {
                    cols[b].insert(a);
                }
            }
            cols
        })
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.rows[a].contains(b)
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(BitSet::count).sum()
    }

    /// Edges in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(a, r)| r.iter().map(move |b| (a, b)))
    }

    pub fn presentation(&self) -> Option<&IntervalPresentation> {
        self.presentation.as_ref()
    }

    /// `|R ∩ (A × B)|`.
    pub fn edges_between(&self, a_set: &BitSet, b_set: &BitSet) -> usize {
        a_set
            .iter()
            .map(|a| self.rows[a].intersection_count(b_set))
            .sum()
    }

    /// Exact edge density of `A × B`. Both sets must be nonempty.
    pub fn density(&self, a_set: &BitSet, b_set: &BitSet) -> Result<Rational> {
        if a_set.len() != self.n || b_set.len() != self.m {
            return Err(Error::Input("density: subset universe mismatch".into()));
        }
        let (na, nb) = (a_set.count(), b_set.count());
        if na == 0 || nb == 0 {
            return Err(Error::Domain("density of an empty vertex set".into()));
        }
        Ok(ratio::from_counts(self.edges_between(a_set, b_set), na * nb))
    }

    /// The graph with `V` and `W` swapped (the dual relation).
    pub fn transpose(&self) -> BipartiteGraph {
        Self::from_rows_unchecked(self.n, self.cols().to_vec())
    }

    /// Relabel: new vertex `perm_v[a]` is old `a`, likewise for `W`.
    pub fn permuted(&self, perm_v: &[usize], perm_w: &[usize]) -> BipartiteGraph {
        let mut rows = vec![BitSet::new(self.m); self.n];
        for (a, row) in self.rows.iter().enumerate() {
            for b in row.iter() {
                rows[perm_v[a]].insert(perm_w[b]);
            }
        }
        Self::from_rows_unchecked(self.m, rows)
    }

    /// Induced subgraph on the listed vertices, in the listed order.
    pub fn induced(&self, vs: &[usize], ws: &[usize]) -> BipartiteGraph {
        let rows = vs
            .iter()
            .map(|&a| BitSet::from_indices(ws.len(), (0..ws.len()).filter(|&j| self.has_edge(a, ws[j]))))
            .collect();
        Self::from_rows_unchecked(ws.len(), rows)
    }
}

impl PartialEq for BipartiteGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.m == other.m && self.rows == other.rows
    }
}

impl Eq for BipartiteGraph {}

impl fmt::Debug for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BipartiteGraph {}x{}", self.n, self.m)?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}
