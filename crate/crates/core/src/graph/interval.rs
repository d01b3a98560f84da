use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::ratio::{self, Rational};

use super::BipartiteGraph;

/// Closed interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// Points on a line for `V`; each `b ∈ W` owns a union of at most `s`
/// disjoint closed intervals and `R(a, b)` iff point `a` lies in that union.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalPresentation {
    s: usize,
    points: Vec<Rational>,
    unions: Vec<Vec<Interval>>,
}

impl IntervalPresentation {
    /// Validates that each union is sorted, pairwise disjoint and has at most
    /// `s` members.
    pub fn new(s: usize, points: Vec<Rational>, unions: Vec<Vec<Interval>>) -> Result<Self> {
        if s == 0 {
            return Err(Error::Input("interval presentation needs s >= 1".into()));
        }
        for (b, u) in unions.iter().enumerate() {
            if u.len() > s {
                return Err(Error::Input(format!(
                    "w-vertex {b} has {} intervals, more than s = {s}",
                    u.len()
                )));
            }
            for iv in u {
                if iv.lo > iv.hi {
                    return Err(Error::Input(format!(
                        "w-vertex {b}: interval [{}, {}] is reversed",
                        ratio::format(&iv.lo),
                        ratio::format(&iv.hi)
                    )));
                }
            }
            for pair in u.windows(2) {
                if pair[0].hi >= pair[1].lo {
                    return Err(Error::Input(format!(
                        "w-vertex {b}: intervals overlap or are out of order"
                    )));
                }
            }
        }
        Ok(IntervalPresentation { s, points, unions })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn unions(&self) -> &[Vec<Interval>] {
        &self.unions
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn m(&self) -> usize {
        self.unions.len()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        let x = &self.points[a];
        self.unions[b].iter().any(|iv| iv.contains(x))
    }

    /// The induced graph, with this presentation attached.
    pub fn to_graph(&self) -> BipartiteGraph {
        let m = self.m();
        let rows = (0..self.n())
            .map(|a| BitSet::from_indices(m, (0..m).filter(|&b| self.contains(a, b))))
            .collect();
        BipartiteGraph::from_rows_unchecked(m, rows).with_presentation(self.clone())
    }
}
