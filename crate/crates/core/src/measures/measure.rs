use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Side};
use crate::ratio::{self, Rational};

/// Integer weights over a common denominator, so masses are sums of integers.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Scaled {
    /// every numerator is 1
    Uniform,
    /// the common denominator fits a `u64`, hence so does every partial sum
    Small(Vec<u64>),
    Big(Vec<BigUint>),
}

/// A probability measure on one side of a graph with exact rational weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedMeasure {
    side: Side,
    weights: Vec<Rational>,
    denom: BigUint,
    scaled: Scaled,
}

impl WeightedMeasure {
    /// Normalised counting measure on `side` of `g`.
    pub fn uniform(g: &BipartiteGraph, side: Side) -> Result<Self> {
        Self::uniform_on(side, g.side_len(side))
    }

    pub fn uniform_on(side: Side, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::Domain("uniform measure on an empty side".into()));
        }
        Ok(WeightedMeasure {
            side,
            weights: vec![ratio::from_counts(1, len); len],
            denom: BigUint::from(len),
            scaled: Scaled::Uniform,
        })
    }

    /// Weights must be nonnegative and sum to exactly 1.
    pub fn from_weights(side: Side, weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Domain("measure on an empty side".into()));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
            return Err(Error::Input(format!(
                "negative weight {} at index {i}",
                ratio::format(w)
            )));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::Input(format!(
                "weights sum to {}, not 1",
                ratio::format(&total)
            )));
        }
        let denom = weights
            .iter()
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let nums: Vec<BigUint> = weights
            .iter()
            .map(|w| {
                (w.numer() * (&denom / w.denom()))
                    .to_biguint()
                    .expect("nonnegative")
            })
            .collect();
        let denom = denom.to_biguint().expect("positive");
        let scaled = if denom.to_u64().is_some() {
            Scaled::Small(nums.iter().map(|x| x.to_u64().unwrap()).collect())
        } else {
            Scaled::Big(nums)
        };
        Ok(WeightedMeasure {
            side,
            weights,
            denom,
            scaled,
        })
    }

    /// Sparse form: unspecified indices get weight 0.
    pub fn from_pairs(side: Side, len: usize, pairs: &[(usize, Rational)]) -> Result<Self> {
        let mut w = vec![Rational::zero(); len];
        for (i, r) in pairs {
            if *i >= len {
                return Err(Error::Input(format!("weight index {i} out of range 0..{len}")));
            }
            w[*i] += r;
        }
        Self::from_weights(side, w)
    }

    /// Weight file: lines `<index> <rational>`; `#` comments and blank lines skipped.
    pub fn parse_weights(side: Side, len: usize, text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut t = line.split_whitespace();
            let bad = |msg: &str| Error::Parse {
                line: ln + 1,
                msg: msg.to_string(),
            };
            let i: usize = t
                .next()
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| bad("expected `<index> <rational>`"))?;
            let r = t
                .next()
                .ok_or_else(|| bad("missing weight"))
                .and_then(|x| ratio::parse(x).map_err(|_| bad("bad rational weight")))?;
            if t.next().is_some() {
                return Err(bad("trailing tokens"));
            }
            pairs.push((i, r));
        }
        Self::from_pairs(side, len, &pairs)
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn is_uniform(&self) -> bool {
        self.scaled == Scaled::Uniform
    }

    pub fn weight(&self, i: usize) -> &Rational {
        &self.weights[i]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Common denominator of all weights.
    pub fn denom(&self) -> &BigUint {
        &self.denom
    }

    /// Scaled weight of a single vertex (numerator over [`Self::denom`]).
    pub fn weight_num(&self, i: usize) -> BigUint {
        match &self.scaled {
            Scaled::Uniform => BigUint::one(),
            Scaled::Small(w) => BigUint::from(w[i]),
            Scaled::Big(w) => w[i].clone(),
        }
    }

    /// `μ(set) · denom`, an exact integer.
    pub fn mass_num(&self, set: &BitSet) -> BigUint {
        debug_assert_eq!(set.len(), self.len());
        match &self.scaled {
            Scaled::Uniform => BigUint::from(set.count()),
            Scaled::Small(w) => BigUint::from(set.iter().map(|i| w[i]).sum::<u64>()),
            Scaled::Big(w) => set.iter().map(|i| &w[i]).sum(),
        }
    }

    /// `μ(A ∩ B) · denom` without materialising the intersection.
    pub fn mass_num_and(&self, a: &BitSet, b: &BitSet) -> BigUint {
        match &self.scaled {
            Scaled::Uniform => BigUint::from(a.intersection_count(b)),
            _ => self.mass_num(&a.and(b)),
        }
    }

    pub fn mass(&self, set: &BitSet) -> Rational {
        ratio::from_biguints(self.mass_num(set), self.denom.clone())
    }

    pub fn support(&self) -> BitSet {
        BitSet::from_indices(
            self.len(),
            (0..self.len()).filter(|&i| self.weights[i].is_positive()),
        )
    }

    pub fn has_full_support(&self) -> bool {
        self.weights.iter().all(Signed::is_positive)
    }

    /// `μ(set) > δ`: the finite reading of "wide".
    pub fn is_wide(&self, set: &BitSet, delta: &Rational) -> bool {
        &self.mass(set) > delta
    }

    pub(crate) fn check_side(&self, side: Side, len: usize) -> Result<()> {
        if self.side != side || self.len() != len {
            return Err(Error::Input(format!(
                "measure on {:?} with {} points does not match {:?} with {len} vertices",
                self.side,
                self.len(),
                side
            )));
        }
        Ok(())
    }
}
