use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::ratio::{self, Rational};

/// Which regularity statement a partition is meant to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `ε`-homogeneous per column, no exceptional pairs.
    Stable,
    /// `ε`-homogeneous pairs outside an exceptional set of mass `< ε`.
    Nip,
    /// Fully homogeneous pairs outside an exceptional set of mass `< ε`.
    Distal,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stable" => Ok(Mode::Stable),
            "nip" => Ok(Mode::Nip),
            "distal" => Ok(Mode::Distal),
            _ => Err(Error::Input(format!("unknown mode `{s}`"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Stable => "stable",
            Mode::Nip => "nip",
            Mode::Distal => "distal",
        })
    }
}

/// How a partition was produced. Every field except `engine` is optional so
/// hand-written partitions can leave it nearly empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub engine: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "ratio::serde_str_opt")]
    pub eta: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_c: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splits: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub absorbed: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback: Option<bool>,
    /// Index of the part holding every zero-weight vertex.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_weight_part: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vc_estimate: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retries: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_parts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_met: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cells: Option<usize>,
}

/// Partitions of `V` and `W` plus exceptional pairs of part indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiPartition {
    #[serde(rename = "parts_V")]
    pub parts_v: Vec<Vec<usize>>,
    #[serde(rename = "parts_W")]
    pub parts_w: Vec<Vec<usize>>,
    pub exceptional: Vec<(usize, usize)>,
    pub mode: Mode,
    #[serde(with = "ratio::serde_str")]
    pub epsilon: Rational,
    pub provenance: Provenance,
}

impl BiPartition {
    /// Builds from bit sets; each part is listed in increasing index order and
    /// the exceptional set is sorted.
    pub fn from_sets(
        parts_v: &[BitSet],
        parts_w: &[BitSet],
        mut exceptional: Vec<(usize, usize)>,
        mode: Mode,
        epsilon: Rational,
        provenance: Provenance,
    ) -> Self {
        exceptional.sort_unstable();
        exceptional.dedup();
        BiPartition {
            parts_v: parts_v.iter().map(BitSet::to_vec).collect(),
            parts_w: parts_w.iter().map(BitSet::to_vec).collect(),
            exceptional,
            mode,
            epsilon,
            provenance,
        }
    }

    /// Checks both sides are partitions into nonempty parts and that the
    /// exceptional pairs index existing parts.
    pub fn validate(&self, g: &BipartiteGraph) -> Result<()> {
        check_cover("V", &self.parts_v, g.n())?;
        check_cover("W", &self.parts_w, g.m())?;
        if let Some(&(i, j)) = self
            .exceptional
            .iter()
            .find(|&&(i, j)| i >= self.parts_v.len() || j >= self.parts_w.len())
        {
            return Err(Error::Input(format!(
                "exceptional pair ({i}, {j}) out of range for {}x{} parts",
                self.parts_v.len(),
                self.parts_w.len()
            )));
        }
        Ok(())
    }

    pub fn sets_v(&self, n: usize) -> Vec<BitSet> {
        self.parts_v
            .iter()
            .map(|p| BitSet::from_indices(n, p.iter().copied()))
            .collect()
    }

    pub fn sets_w(&self, m: usize) -> Vec<BitSet> {
        self.parts_w
            .iter()
            .map(|p| BitSet::from_indices(m, p.iter().copied()))
            .collect()
    }

    /// `exceptional` as an `|P_V| × |P_W|` grid.
    pub fn exceptional_grid(&self) -> Vec<Vec<bool>> {
        let mut grid = vec![vec![false; self.parts_w.len()]; self.parts_v.len()];
        for &(i, j) in &self.exceptional {
            grid[i][j] = true;
        }
        grid
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn check_cover(side: &str, parts: &[Vec<usize>], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    for (k, p) in parts.iter().enumerate() {
        if p.is_empty() {
            return Err(Error::Input(format!("part {k} of {side} is empty")));
        }
        for &x in p {
            if x >= len {
                return Err(Error::Input(format!(
                    "vertex {x} in part {k} of {side} out of range 0..{len}"
                )));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::Input(format!("vertex {x} of {side} appears twice")));
            }
        }
    }
    if let Some(x) = seen.iter().position(|s| !s) {
        return Err(Error::Input(format!("vertex {x} of {side} is in no part")));
    }
    Ok(())
}

/// Coarsest common refinement of partitions of `0..n`: the nonempty
/// intersections, ordered by smallest element.
pub fn refine_common(n: usize, partitions: &[Vec<BitSet>]) -> Result<Vec<BitSet>> {
    let mut key = vec![Vec::with_capacity(partitions.len()); n];
    for (t, p) in partitions.iter().enumerate() {
        let mut seen = BitSet::new(n);
        for (k, part) in p.iter().enumerate() {
            if part.len() != n || part.intersects(&seen) {
                return Err(Error::Input(format!("input {t} is not a partition of 0..{n}")));
            }
            seen.or_assign(part);
            for x in part.iter() {
                key[x].push(k);
            }
        }
        if !seen.is_full() {
            return Err(Error::Input(format!("input {t} does not cover 0..{n}")));
        }
    }
    let mut index: std::collections::HashMap<&[usize], usize> = std::collections::HashMap::new();
    let mut out: Vec<BitSet> = Vec::new();
    for (x, kx) in key.iter().enumerate() {
        let k = *index.entry(kx).or_insert_with(|| {
            out.push(BitSet::new(n));
            out.len() - 1
        });
        out[k].insert(x);
    }
    Ok(out)
}
