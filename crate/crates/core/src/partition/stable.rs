use std::collections::HashMap;

use num_traits::{Signed, Zero};

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Side};
use crate::measures::WeightedMeasure;
use crate::par;
use crate::ratio::{self, Rational};
use crate::scaled::{self, Eps, Masses, Scalar};
use crate::verify;

use super::{BiPartition, Mode, Provenance};

/// How many times the absorption threshold is halved before giving up on it.
const ETA_HALVINGS: usize = 16;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StableOptions {
    /// Parts lighter than this are absorbed into a sibling. Defaults to
    /// `ε² / (4·parts)`.
    pub eta: Option<Rational>,
    /// Splits allowed before falling back to singleton parts.
    pub max_splits: Option<usize>,
}

/// A partition of `V` and `W` with no exceptional pairs in which, for every
/// pair `(V_i, W_j)`, either every `b ∈ W_j` misses at most an `ε` fraction of
/// `V_i` or every `b ∈ W_j` hits at most an `ε` fraction of it.
///
/// `V` is refined by columns until every `(V_i, b)` is strictly
/// `ε`-homogeneous, always taking the split whose lighter side is heaviest.
/// Light parts are then folded into the sibling they agree with most, as long
/// as the result stays homogeneous. `W` is grouped by which `V_i` each column
/// is dense on. Zero-weight vertices of `μ` go into a final part of their own
/// (`provenance.zero_weight_part`).
///
/// The result is checked before it is returned; a failed check is an error.
pub fn stable_partition(
    g: &BipartiteGraph,
    eps: &Rational,
    mu: &WeightedMeasure,
    opts: &StableOptions,
) -> Result<BiPartition> {
    if !ratio::in_open_unit(eps) {
        return Err(Error::Input(format!(
            "epsilon must lie in (0, 1), got {}",
            ratio::format(eps)
        )));
    }
    if g.m() == 0 {
        return Err(Error::Domain("graph has no W-vertices".into()));
    }
    mu.check_side(Side::V, g.n())?;
    if let Some(eta) = &opts.eta {
        if eta.is_negative() {
            return Err(Error::Input("eta must be nonnegative".into()));
        }
    }
    let out = match (scaled::small_masses(mu), scaled::small_eps(eps)) {
        (Some(m), Some(e)) => Engine { g, mu: m, eps: e }.run(eps, mu, opts),
        _ => Engine {
            g,
            mu: scaled::big_masses(mu),
            eps: scaled::big_eps(eps).expect("positive"),
        }
        .run(eps, mu, opts),
    };
    let report = verify::check_stable(g, &out, eps, mu)?;
    if !report.pass {
        return Err(Error::Domain(format!(
            "stable engine produced a partition that fails verification: {}",
            report.witness.map(|w| w.to_string()).unwrap_or_default()
        )));
    }
    Ok(out)
}

/// Best split of one part: the lighter side's mass and the column.
type Candidate<N> = Option<(N, usize)>;

struct Engine<'a, N> {
    g: &'a BipartiteGraph,
    mu: Masses<N>,
    eps: Eps<N>,
}

impl<N: Scalar> Engine<'_, N> {
    fn dense(&self, part: &BitSet, total: &N, b: usize) -> bool {
        let inside = self.mu.of_and(part, self.g.col(b));
        self.eps.lt(&(total.clone() - inside), total)
    }

    /// Strictly `ε`-homogeneous against every column.
    fn homogeneous(&self, part: &BitSet) -> bool {
        let total = self.mu.of(part);
        (0..self.g.m()).all(|b| {
            let x = self.mu.of_and(part, self.g.col(b));
            self.eps.lt(&x, &total) || self.eps.lt(&(total.clone() - x), &total)
        })
    }

    fn candidate(&self, part: &BitSet) -> Candidate<N> {
        let total = self.mu.of(part);
        par::argmax(self.g.m(), |b| {
            let x = self.mu.of_and(part, self.g.col(b));
            let rest = total.clone() - x.clone();
            if self.eps.lt(&x, &total) || self.eps.lt(&rest, &total) {
                return None;
            }
            // larger key wins, ties to the smaller column
            Some((x.min(rest), ()))
        })
        .map(|(b, key, ())| (key, b))
    }

    fn run(&self, eps: &Rational, mu: &WeightedMeasure, opts: &StableOptions) -> BiPartition {
        let g = self.g;
        let support = mu.support();
        let zero = support.complement();
        let max_splits = opts.max_splits.unwrap_or(usize::MAX);

        let mut parts = vec![support.clone()];
        let mut cands = vec![self.candidate(&support)];
        let mut split_cols: Vec<usize> = Vec::new();
        let mut splits = 0usize;
        let mut fallback = false;
        loop {
            let mut pick: Option<(usize, &N, usize)> = None;
            for (i, c) in cands.iter().enumerate() {
                if let Some((key, b)) = c {
                    if pick.is_none_or(|(_, k, _)| key > k) {
                        pick = Some((i, key, *b));
                    }
                }
            }
            let Some((i, _, b)) = pick else { break };
            if splits >= max_splits {
                fallback = true;
                break;
            }
            let outside = parts[i].and_not(g.col(b));
            parts[i].and_assign(g.col(b));
            cands[i] = self.candidate(&parts[i]);
            cands.push(self.candidate(&outside));
            parts.push(outside);
            if !split_cols.contains(&b) {
                split_cols.push(b);
            }
            splits += 1;
        }

        let (parts, eta, absorbed) = if fallback {
            let singles = support.iter().map(|a| BitSet::singleton(g.n(), a)).collect();
            (singles, Rational::zero(), 0)
        } else {
            let eta = opts.eta.clone().unwrap_or_else(|| {
                eps * eps / Rational::from_integer((4 * parts.len()).into())
            });
            self.absorb(parts, &split_cols, eta)
        };

        let mut parts = parts;
        parts.sort_by_key(|p| p.first());
        let zero_part = (!zero.is_empty()).then(|| {
            parts.push(zero.clone());
            parts.len() - 1
        });
        let ws = self.group_w(&parts, zero_part);
        BiPartition::from_sets(
            &parts,
            &ws,
            Vec::new(),
            Mode::Stable,
            eps.clone(),
            Provenance {
                engine: "stable".into(),
                eta: Some(eta),
                splits: Some(splits),
                absorbed: Some(absorbed),
                fallback: Some(fallback),
                zero_weight_part: zero_part,
                ..Default::default()
            },
        )
    }

    /// Folds parts of mass `< eta` into the heavier part whose dense/sparse
    /// pattern on the split columns agrees most; halves `eta` until every
    /// merged part stays homogeneous, and gives up after a fixed number of
    /// halvings. Returns the parts, the threshold used and the merge count.
    fn absorb(
        &self,
        parts: Vec<BitSet>,
        split_cols: &[usize],
        mut eta: Rational,
    ) -> (Vec<BitSet>, Rational, usize) {
        let masses: Vec<N> = parts.iter().map(|p| self.mu.of(p)).collect();
        let signature = |p: &BitSet, total: &N| -> Vec<bool> {
            split_cols.iter().map(|&b| self.dense(p, total, b)).collect()
        };
        let sigs: Vec<Vec<bool>> = parts.iter().zip(&masses).map(|(p, t)| signature(p, t)).collect();
        let total_mass = self.mu.total.to_big();
        for _ in 0..ETA_HALVINGS {
            if eta.is_zero() {
                break;
            }
            // mass < eta  <=>  mass * den < eta_num * total_denominator
            let light: Vec<bool> = masses
                .iter()
                .map(|x| {
                    Rational::from_integer(x.to_big().into())
                        < &eta * Rational::from_integer(total_mass.clone().into())
                })
                .collect();
            let heavy: Vec<usize> = (0..parts.len()).filter(|&i| !light[i]).collect();
            if heavy.is_empty() || heavy.len() == parts.len() {
                return (parts, eta, 0);
            }
            let mut merged: Vec<BitSet> = heavy.iter().map(|&i| parts[i].clone()).collect();
            let mut touched = vec![false; merged.len()];
            for i in (0..parts.len()).filter(|&i| light[i]) {
                let agree = |h: usize| sigs[i].iter().zip(&sigs[heavy[h]]).filter(|(x, y)| x == y).count();
                let target = (0..heavy.len())
                    .max_by(|&x, &y| agree(x).cmp(&agree(y)).then(y.cmp(&x)))
                    .expect("heavy parts exist");
                merged[target].or_assign(&parts[i]);
                touched[target] = true;
            }
            let ok = par::map(merged.len(), |k| !touched[k] || self.homogeneous(&merged[k]));
            if ok.into_iter().all(|x| x) {
                let absorbed = parts.len() - merged.len();
                return (merged, eta, absorbed);
            }
            eta /= Rational::from_integer(2.into());
        }
        (parts, Rational::zero(), 0)
    }

    /// Columns with the same dense pattern over the `V`-parts share a part,
    /// numbered by their first column.
    fn group_w(&self, parts: &[BitSet], zero_part: Option<usize>) -> Vec<BitSet> {
        let g = self.g;
        let totals: Vec<N> = parts.iter().map(|p| self.mu.of(p)).collect();
        let patterns: Vec<BitSet> = par::map(g.m(), |b| {
            BitSet::from_indices(
                parts.len(),
                (0..parts.len())
                    .filter(|&i| Some(i) != zero_part && self.dense(&parts[i], &totals[i], b)),
            )
        });
        group_by_pattern(g.m(), &patterns)
    }
}

/// Groups `0..len` by equal keys, groups ordered by first member.
pub(crate) fn group_by_pattern<K: std::hash::Hash + Eq>(len: usize, keys: &[K]) -> Vec<BitSet> {
    let mut index: HashMap<&K, usize> = HashMap::new();
    let mut out: Vec<BitSet> = Vec::new();
    for (x, k) in keys.iter().enumerate() {
        let id = *index.entry(k).or_insert_with(|| {
            out.push(BitSet::new(len));
            out.len() - 1
        });
        out[id].insert(x);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};
    use crate::ratio::ratio;

    fn run(g: &BipartiteGraph, eps: Rational) -> BiPartition {
        let mu = WeightedMeasure::uniform(g, Side::V).unwrap();
        stable_partition(g, &eps, &mu, &StableOptions::default()).unwrap()
    }

    #[test]
    fn complete_graph_is_one_block() {
        let p = run(&BipartiteGraph::complete(5, 4), ratio(1, 10));
        assert_eq!(p.parts_v, vec![vec![0, 1, 2, 3, 4]]);
        assert_eq!(p.parts_w, vec![vec![0, 1, 2, 3]]);
        assert!(p.exceptional.is_empty());
    }

    #[test]
    fn h4_quarter() {
        let g = generate(&Family::Half { k: 4 }).unwrap();
        let p = run(&g, ratio(1, 4));
        assert!(p.parts_v.len() <= 4);
        assert!(p.exceptional.is_empty());
    }

    #[test]
    fn single_edge() {
        let g = BipartiteGraph::build(2, 2, &[(0, 0)]).unwrap();
        let p = run(&g, ratio(1, 4));
        assert_eq!(p.parts_v, vec![vec![0], vec![1]]);
    }

    #[test]
    fn half_graph_parts_are_intervals() {
        let g = generate(&Family::Half { k: 20 }).unwrap();
        let p = run(&g, ratio(1, 10));
        assert!(p.parts_v.len() <= 20);
        for part in &p.parts_v {
            assert_eq!(part.last().unwrap() - part[0] + 1, part.len());
        }
    }

    #[test]
    fn zero_weight_vertices_get_their_own_part() {
        let g = generate(&Family::Half { k: 4 }).unwrap();
        let mu = WeightedMeasure::from_weights(
            Side::V,
            vec![ratio(1, 2), ratio(0, 1), ratio(1, 2), ratio(0, 1)],
        )
        .unwrap();
        let p = stable_partition(&g, &ratio(1, 4), &mu, &StableOptions::default()).unwrap();
        let z = p.provenance.zero_weight_part.unwrap();
        assert_eq!(p.parts_v[z], vec![1, 3]);
        assert_eq!(z, p.parts_v.len() - 1);
    }

    #[test]
    fn split_cap_falls_back_to_singletons() {
        let g = generate(&Family::Half { k: 6 }).unwrap();
        let mu = WeightedMeasure::uniform(&g, Side::V).unwrap();
        let opts = StableOptions {
            max_splits: Some(1),
            ..Default::default()
        };
        let p = stable_partition(&g, &ratio(1, 10), &mu, &opts).unwrap();
        assert_eq!(p.provenance.fallback, Some(true));
        assert_eq!(p.parts_v.len(), 6);
    }

    #[test]
    fn epsilon_range() {
        let g = BipartiteGraph::complete(2, 2);
        let mu = WeightedMeasure::uniform(&g, Side::V).unwrap();
        for e in [ratio(0, 1), ratio(1, 1), ratio(3, 2)] {
            assert!(stable_partition(&g, &e, &mu, &StableOptions::default()).is_err());
        }
    }
}
