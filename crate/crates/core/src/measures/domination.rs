use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Side};
use crate::ratio::{self, Rational};

use super::{type_partition, WeightedMeasure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AtomVerdict {
    Contained,
    Disjoint,
    /// Both sides of the split have mass above the threshold.
    SplitWide,
    SplitNarrow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DominationMode {
    /// Every split atom violates.
    Smooth,
    /// Only wide-split atoms violate.
    Generic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomReport {
    pub pattern: String,
    pub members: Vec<usize>,
    #[serde(with = "ratio::serde_str")]
    pub mass: Rational,
    #[serde(with = "ratio::serde_str")]
    pub mass_in: Rational,
    #[serde(with = "ratio::serde_str")]
    pub mass_out: Rational,
    pub verdict: AtomVerdict,
    pub violating: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominationReport {
    pub mode: DominationMode,
    pub params: Vec<usize>,
    pub target: String,
    #[serde(with = "ratio::serde_str")]
    pub delta: Rational,
    pub atoms: Vec<AtomReport>,
    #[serde(with = "ratio::serde_str")]
    pub exceptional_mass: Rational,
}

impl DominationReport {
    /// Sum of masses of violating atoms, recomputed from the verdicts.
    pub fn recompute_exceptional_mass(&self) -> Rational {
        self.atoms
            .iter()
            .filter(|a| a.violating)
            .map(|a| &a.mass)
            .sum()
    }
}

/// Every type over `params` either lies inside `target` or misses it; atoms
/// that meet both sides are counted as exceptional regardless of mass.
pub fn dominate_smooth(
    g: &BipartiteGraph,
    params: &[usize],
    mu: &WeightedMeasure,
    target: &BitSet,
    description: &str,
) -> Result<DominationReport> {
    dominate(g, params, mu, target, description, DominationMode::Smooth, &Rational::zero())
}

/// An atom is exceptional only when both `atom ∩ target` and
/// `atom ∖ target` have `mu`-mass above `delta`.
pub fn dominate_generic(
    g: &BipartiteGraph,
    params: &[usize],
    mu: &WeightedMeasure,
    target: &BitSet,
    description: &str,
    delta: &Rational,
) -> Result<DominationReport> {
    if delta < &Rational::zero() {
        return Err(Error::Input("delta must be nonnegative".into()));
    }
    dominate(g, params, mu, target, description, DominationMode::Generic, delta)
}

fn dominate(
    g: &BipartiteGraph,
    params: &[usize],
    mu: &WeightedMeasure,
    target: &BitSet,
    description: &str,
    mode: DominationMode,
    delta: &Rational,
) -> Result<DominationReport> {
    mu.check_side(Side::V, g.n())?;
    if target.len() != g.n() {
        return Err(Error::Input(format!(
            "target has length {}, expected {}",
            target.len(),
            g.n()
        )));
    }
    let atoms = type_partition(g, params)?;
    let params = atoms
        .first()
        .map(|a| a.params.clone())
        .unwrap_or_default();
    let mut reports = Vec::with_capacity(atoms.len());
    let mut exceptional = Rational::zero();
    for atom in &atoms {
        let inside = atom.members.and(target);
        let outside = atom.members.and_not(target);
        let mass_in = mu.mass(&inside);
        let mass_out = mu.mass(&outside);
        let verdict = if outside.is_empty() {
            AtomVerdict::Contained
        } else if inside.is_empty() {
            AtomVerdict::Disjoint
        } else if &mass_in > delta && &mass_out > delta {
            AtomVerdict::SplitWide
        } else {
            AtomVerdict::SplitNarrow
        };
        let violating = match mode {
            DominationMode::Smooth => {
                matches!(verdict, AtomVerdict::SplitWide | AtomVerdict::SplitNarrow)
            }
            DominationMode::Generic => verdict == AtomVerdict::SplitWide,
        };
        let mass = &mass_in + &mass_out;
        if violating {
            exceptional += &mass;
        }
        reports.push(AtomReport {
            pattern: atom.pattern_string(),
            members: atom.members.to_vec(),
            mass,
            mass_in,
            mass_out,
            verdict,
            violating,
        });
    }
    Ok(DominationReport {
        mode,
        params,
        target: description.to_string(),
        delta: delta.clone(),
        atoms: reports,
        exceptional_mass: exceptional,
    })
}
