use std::cmp::Ordering;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Side};
use crate::par;
use crate::ratio::{self, Rational};

use super::WeightedMeasure;

/// Vertices of `V` whose rows agree on the parameter set `params ⊆ W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeAtom {
    /// Sorted, duplicate-free.
    pub params: Vec<usize>,
    /// `pattern[t]` is the edge bit towards `params[t]`.
    pub pattern: BitSet,
    pub members: BitSet,
}

impl TypeAtom {
    pub fn pattern_string(&self) -> String {
        (0..self.pattern.len())
            .map(|t| if self.pattern.contains(t) { '1' } else { '0' })
            .collect()
    }
}

/// An atom with its positive mass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedAtom {
    pub atom: TypeAtom,
    pub weight: Rational,
}

fn normalise_params(g: &BipartiteGraph, params: &[usize]) -> Result<Vec<usize>> {
    if let Some(&b) = params.iter().find(|&&b| b >= g.m()) {
        return Err(Error::Input(format!(
            "parameter {b} out of range 0..{}",
            g.m()
        )));
    }
    let mut p = params.to_vec();
    p.sort_unstable();
    p.dedup();
    Ok(p)
}

/// Atoms of the Boolean algebra generated by the columns in `params`,
/// ordered by pattern with `0 < 1` read from the first parameter on.
pub fn type_partition(g: &BipartiteGraph, params: &[usize]) -> Result<Vec<TypeAtom>> {
    let params = normalise_params(g, params)?;
    let k = params.len();
    let patterns: Vec<BitSet> = par::map(g.n(), |a| {
        BitSet::from_indices(k, (0..k).filter(|&t| g.has_edge(a, params[t])))
    });
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by(|&x, &y| match patterns[x].lex_cmp(&patterns[y]) {
        Ordering::Equal => x.cmp(&y),
        o => o,
    });
    let mut atoms: Vec<TypeAtom> = Vec::new();
    for a in order {
        match atoms.last_mut() {
            Some(last) if last.pattern == patterns[a] => last.members.insert(a),
            _ => atoms.push(TypeAtom {
                params: params.clone(),
                pattern: patterns[a].clone(),
                members: BitSet::singleton(g.n(), a),
            }),
        }
    }
    Ok(atoms)
}

/// Atomic decomposition of `mu` over `params`: atoms with their masses, zero
/// mass atoms dropped. The masses sum to exactly 1.
pub fn decompose(
    mu: &WeightedMeasure,
    g: &BipartiteGraph,
    params: &[usize],
) -> Result<Vec<WeightedAtom>> {
    mu.check_side(Side::V, g.n())?;
    Ok(type_partition(g, params)?
        .into_iter()
        .map(|atom| WeightedAtom {
            weight: mu.mass(&atom.members),
            atom,
        })
        .filter(|w| !w.weight.is_zero())
        .collect())
}

/// Serialisable view of an atom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomSummary {
    pub pattern: String,
    pub members: Vec<usize>,
    #[serde(with = "ratio::serde_str")]
    pub weight: Rational,
}

impl From<&WeightedAtom> for AtomSummary {
    fn from(w: &WeightedAtom) -> Self {
        AtomSummary {
            pattern: w.atom.pattern_string(),
            members: w.atom.members.to_vec(),
            weight: w.weight.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};
    use crate::ratio::ratio;

    #[test]
    fn no_params_one_atom() {
        let g = generate(&Family::Half { k: 3 }).unwrap();
        let atoms = type_partition(&g, &[]).unwrap();
        assert_eq!(atoms.len(), 1);
        assert!(atoms[0].members.is_full());
    }

    #[test]
    fn h2_single_parameter() {
        let g = generate(&Family::Half { k: 2 }).unwrap();
        let atoms = type_partition(&g, &[0]).unwrap();
        assert_eq!(atoms.len(), 2);
        assert_eq!(atoms[0].pattern_string(), "0");
        assert_eq!(atoms[0].members.to_vec(), vec![1]);
        assert_eq!(atoms[1].pattern_string(), "1");
        assert_eq!(atoms[1].members.to_vec(), vec![0]);
    }

    #[test]
    fn params_normalised() {
        let g = generate(&Family::Half { k: 3 }).unwrap();
        assert_eq!(type_partition(&g, &[2, 0, 2]).unwrap()[0].params, vec![0, 2]);
        assert!(type_partition(&g, &[3]).is_err());
    }

    #[test]
    fn decompose_drops_null_atoms() {
        let g = generate(&Family::Half { k: 2 }).unwrap();
        let mu = WeightedMeasure::from_weights(Side::V, vec![ratio(1, 1), ratio(0, 1)]).unwrap();
        let d = decompose(&mu, &g, &[0, 1]).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].atom.members.to_vec(), vec![0]);
        assert_eq!(d[0].weight, ratio(1, 1));

        let uni = WeightedMeasure::uniform(&g, Side::V).unwrap();
        let d = decompose(&uni, &g, &[0]).unwrap();
        let w: Vec<_> = d.iter().map(|x| x.weight.clone()).collect();
        assert_eq!(w, vec![ratio(1, 2), ratio(1, 2)]);
    }
}
