use serde::{Deserialize, Serialize, Serializer};

use crate::partition::{Mode, Provenance};
use crate::ratio::{self, Rational};

/// Classification of one pair `(V_i, W_j)`, strongest label first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairClass {
    /// `V_i × W_j ⊆ R`.
    HomEdge,
    /// `V_i × W_j ∩ R = ∅`.
    HomNonEdge,
    /// Non-edge mass within `ε` of the pair mass.
    EpsDense,
    /// Edge mass within `ε` of the pair mass.
    EpsSparse,
    Irregular,
    /// One of the parts has measure zero.
    Undefined,
}

impl PairClass {
    pub fn is_eps_homogeneous(self) -> bool {
        matches!(
            self,
            PairClass::HomEdge | PairClass::HomNonEdge | PairClass::EpsDense | PairClass::EpsSparse
        )
    }

    pub fn is_homogeneous(self) -> bool {
        matches!(self, PairClass::HomEdge | PairClass::HomNonEdge)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub hom_edge: usize,
    pub hom_non_edge: usize,
    pub eps_dense: usize,
    pub eps_sparse: usize,
    pub irregular: usize,
    pub undefined: usize,
}

impl ClassCounts {
    pub(crate) fn add(&mut self, c: PairClass) {
        match c {
            PairClass::HomEdge => self.hom_edge += 1,
            PairClass::HomNonEdge => self.hom_non_edge += 1,
            PairClass::EpsDense => self.eps_dense += 1,
            PairClass::EpsSparse => self.eps_sparse += 1,
            PairClass::Irregular => self.irregular += 1,
            PairClass::Undefined => self.undefined += 1,
        }
    }

    pub(crate) fn merge(&mut self, o: &ClassCounts) {
        self.hom_edge += o.hom_edge;
        self.hom_non_edge += o.hom_non_edge;
        self.eps_dense += o.eps_dense;
        self.eps_sparse += o.eps_sparse;
        self.irregular += o.irregular;
        self.undefined += o.undefined;
    }
}

/// The first reason a check failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    InvalidPartition {
        reason: String,
    },
    /// Stable mode allows no exceptional pairs.
    DeclaredExceptional {
        pair: (usize, usize),
    },
    /// A column of `W_j` that is neither almost full nor almost empty on
    /// `V_i`, or that disagrees with the other columns of `W_j`.
    Column {
        pair: (usize, usize),
        b: usize,
        #[serde(with = "ratio::serde_str")]
        density: Rational,
        reason: String,
    },
    Pair {
        pair: (usize, usize),
        #[serde(with = "ratio::serde_str")]
        density: Rational,
        class: PairClass,
    },
    /// `R(a, b)` is `edge`, against the majority of the pair.
    NotHomogeneous {
        pair: (usize, usize),
        a: usize,
        b: usize,
        edge: bool,
    },
    ExceptionalMass {
        #[serde(with = "ratio::serde_str")]
        mass: Rational,
    },
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Witness::InvalidPartition { reason } => write!(f, "invalid partition: {reason}"),
            Witness::DeclaredExceptional { pair } => {
                write!(f, "pair {pair:?} is exceptional, none allowed in stable mode")
            }
            Witness::Column { pair, b, density, reason } => write!(
                f,
                "pair {pair:?}, column {b}: density {} ({reason})",
                ratio::format(density)
            ),
            Witness::Pair { pair, density, class } => write!(
                f,
                "pair {pair:?} has density {} ({class:?})",
                ratio::format(density)
            ),
            Witness::NotHomogeneous { pair, a, b, edge } => write!(
                f,
                "pair {pair:?} is not homogeneous: ({a}, {b}) is {}",
                if *edge { "an edge" } else { "a non-edge" }
            ),
            Witness::ExceptionalMass { mass } => {
                write!(f, "exceptional mass {} is not below epsilon", ratio::format(mass))
            }
        }
    }
}

/// Density matrices and class grids are only materialised up to this many pairs.
pub const GRID_LIMIT: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub mode: Mode,
    #[serde(with = "ratio::serde_str")]
    pub epsilon: Rational,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    pub parts_v: usize,
    pub parts_w: usize,
    pub exceptional_pairs: usize,
    /// `(μ⊗ν)` of the exceptional rectangles.
    #[serde(with = "ratio::serde_str")]
    pub exceptional_mass: Rational,
    pub class_counts: ClassCounts,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "ser_matrix",
        deserialize_with = "de_matrix",
        default
    )]
    pub densities: Option<Vec<Vec<Option<Rational>>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub classes: Option<Vec<Vec<PairClass>>>,
    pub provenance: Provenance,
}

fn ser_matrix<S: Serializer>(
    m: &Option<Vec<Vec<Option<Rational>>>>,
    s: S,
) -> Result<S::Ok, S::Error> {
    let text: Option<Vec<Vec<Option<String>>>> = m.as_ref().map(|rows| {
        rows.iter()
            .map(|r| r.iter().map(|x| x.as_ref().map(ratio::format)).collect())
            .collect()
    });
    text.serialize(s)
}

type Matrix = Vec<Vec<Option<Rational>>>;

fn de_matrix<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<Matrix>, D::Error> {
    let text = Option::<Vec<Vec<Option<String>>>>::deserialize(d)?;
    text.map(|rows| {
        rows.into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|x| x.map(|s| ratio::parse(&s)).transpose())
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()
    })
    .transpose()
    .map_err(serde::de::Error::custom)
}
