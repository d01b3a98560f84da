//! Integer mass arithmetic for the engines and the verifier.
//!
//! A measure is scaled by its common denominator and `ε = p/q` is kept as a
//! pair, so every `x < ε·y` becomes `x·q < p·y` on integers. When the scaled
//! weights and `p, q` fit in `u64` the work is done in `u128`; otherwise in
//! `BigUint`. Both paths give identical answers.

use std::iter::Sum;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::bits::BitSet;
use crate::measures::WeightedMeasure;
use crate::ratio::Rational;

pub(crate) trait Scalar:
    Clone
    + Ord
    + Send
    + Sync
    + Zero
    + From<u64>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Sum
    + std::fmt::Debug
{
    fn to_big(&self) -> BigUint;
}

impl Scalar for u128 {
    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl Scalar for BigUint {
    fn to_big(&self) -> BigUint {
        self.clone()
    }
}

/// Scaled weights of one measure: `None` means every weight is 1.
#[derive(Clone, Debug)]
pub(crate) struct Masses<N> {
    weights: Option<Vec<N>>,
    pub total: N,
}

impl<N: Scalar> Masses<N> {
    pub fn is_uniform(&self) -> bool {
        self.weights.is_none()
    }

    pub fn of(&self, s: &BitSet) -> N {
        match &self.weights {
            None => N::from(s.count() as u64),
            Some(w) => s.iter().map(|i| w[i].clone()).sum(),
        }
    }

    pub fn of_and(&self, a: &BitSet, b: &BitSet) -> N {
        match &self.weights {
            None => N::from(a.intersection_count(b) as u64),
            Some(_) => self.of(&a.and(b)),
        }
    }

    pub fn weight(&self, i: usize) -> N {
        match &self.weights {
            None => N::from(1),
            Some(w) => w[i].clone(),
        }
    }
}

/// `ε = p/q` in lowest terms.
#[derive(Clone, Debug)]
pub(crate) struct Eps<N> {
    pub p: N,
    pub q: N,
}

impl<N: Scalar> Eps<N> {
    /// `x < ε·y`
    pub fn lt(&self, x: &N, y: &N) -> bool {
        x.clone() * self.q.clone() < self.p.clone() * y.clone()
    }

    /// `x <= ε·y`
    pub fn le(&self, x: &N, y: &N) -> bool {
        x.clone() * self.q.clone() <= self.p.clone() * y.clone()
    }
}

pub(crate) fn big_masses(mu: &WeightedMeasure) -> Masses<BigUint> {
    let weights = (!mu.is_uniform()).then(|| (0..mu.len()).map(|i| mu.weight_num(i)).collect());
    Masses {
        weights,
        total: mu.denom().clone(),
    }
}

pub(crate) fn small_masses(mu: &WeightedMeasure) -> Option<Masses<u128>> {
    let weights = if mu.is_uniform() {
        None
    } else {
        Some(
            (0..mu.len())
                .map(|i| mu.weight_num(i).to_u64().map(u128::from))
                .collect::<Option<Vec<_>>>()?,
        )
    };
    Some(Masses {
        weights,
        total: u128::from(mu.denom().to_u64()?),
    })
}

/// `ε` as integers; `None` for a negative `ε`.
pub(crate) fn big_eps(eps: &Rational) -> Option<Eps<BigUint>> {
    Some(Eps {
        p: eps.numer().to_biguint()?,
        q: eps.denom().to_biguint()?,
    })
}

pub(crate) fn small_eps(eps: &Rational) -> Option<Eps<u128>> {
    Some(Eps {
        p: u128::from(eps.numer().to_u64()?),
        q: u128::from(eps.denom().to_u64()?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Side;
    use crate::ratio::ratio;

    #[test]
    fn paths_agree() {
        let mu = WeightedMeasure::from_weights(Side::V, vec![ratio(1, 2), ratio(1, 3), ratio(1, 6)])
            .unwrap();
        let s = small_masses(&mu).unwrap();
        let b = big_masses(&mu);
        let set = BitSet::from_indices(3, [0, 2]);
        assert_eq!(BigUint::from(s.of(&set)), b.of(&set));
        assert_eq!(s.total, 6);
        let e = small_eps(&ratio(2, 3)).unwrap();
        assert!(e.le(&s.of(&set), &s.total));
        assert!(!e.lt(&s.of(&set), &s.total));
    }
}
