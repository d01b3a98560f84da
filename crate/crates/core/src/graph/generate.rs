//! Deterministic generators for the test families.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::ratio::{self, Rational};

use super::{BipartiteGraph, Interval, IntervalPresentation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `H_k`: `R(a_i, b_j)` iff `i <= j`.
    Half { k: usize },
    Complete { n: usize, m: usize },
    Empty { n: usize, m: usize },
    /// Each pair independently with probability `p`.
    Random { n: usize, m: usize, p: Rational, seed: u64 },
    /// `n` points, `m` unions of `s` random disjoint intervals.
    Interval { n: usize, m: usize, s: usize, seed: u64 },
    /// `V = W = F_2^d`, edge iff the inner product is odd.
    Parity { d: usize },
}

pub const MAX_PARITY_DIM: usize = 12;

fn positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        Err(Error::Input(format!("{name} must be positive")))
    } else {
        Ok(())
    }
}

pub fn generate(family: &Family) -> Result<BipartiteGraph> {
    match *family {
        Family::Half { k } => {
            positive("k", k)?;
            let rows = (0..k).map(|i| BitSet::from_indices(k, i..k)).collect();
            Ok(BipartiteGraph::from_rows_unchecked(k, rows))
        }
        Family::Complete { n, m } => {
            positive("n", n)?;
            positive("m", m)?;
            Ok(BipartiteGraph::complete(n, m))
        }
        Family::Empty { n, m } => {
            positive("n", n)?;
            positive("m", m)?;
            Ok(BipartiteGraph::empty(n, m))
        }
        Family::Random { n, m, ref p, seed } => {
            positive("n", n)?;
            positive("m", m)?;
            random(n, m, p, seed)
        }
        Family::Interval { n, m, s, seed } => {
            positive("n", n)?;
            positive("m", m)?;
            positive("s", s)?;
            Ok(random_intervals(n, m, s, seed).to_graph())
        }
        Family::Parity { d } => {
            positive("d", d)?;
            if d > MAX_PARITY_DIM {
                return Err(Error::Input(format!(
                    "parity dimension {d} exceeds {MAX_PARITY_DIM}"
                )));
            }
            let size = 1usize << d;
            let rows = (0..size)
                .map(|a| BitSet::from_indices(size, (0..size).filter(|&b| (a & b).count_ones() % 2 == 1)))
                .collect();
            Ok(BipartiteGraph::from_rows_unchecked(size, rows))
        }
    }
}

fn random(n: usize, m: usize, p: &Rational, seed: u64) -> Result<BipartiteGraph> {
    if p.is_negative() || p > &Rational::one() {
        return Err(Error::Input(format!("p = {} not in [0, 1]", ratio::format(p))));
    }
    let num = p.numer().to_u64();
    let den = p.denom().to_u64();
    let (num, den) = match (num, den) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::Input(
                "p must have numerator and denominator below 2^64".into(),
            ))
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|_| BitSet::from_indices(m, (0..m).filter(|_| rng.gen_range(0..den) < num)))
        .collect();
    Ok(BipartiteGraph::from_rows_unchecked(m, rows))
}

/// Points are a random permutation of the integers `0..n`; every interval
/// endpoint is a distinct half-integer in `[-1/2, n - 1/2]`, so no point ever
/// sits on an endpoint and every interval contains at least one point.
pub fn random_intervals(n: usize, m: usize, s: usize, seed: u64) -> IntervalPresentation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords: Vec<usize> = (0..n).collect();
    coords.shuffle(&mut rng);
    let points = coords
        .into_iter()
        .map(|c| Rational::from_integer(BigInt::from(c)))
        .collect();
    // half-integers (2t - 1)/2 for t in 0..=n
    let slots = n + 1;
    let per = s.min(slots / 2).max(1);
    let unions = (0..m)
        .map(|_| {
            let mut ends = index::sample(&mut rng, slots, 2 * per).into_vec();
            ends.sort_unstable();
            ends.chunks(2)
                .map(|c| Interval::new(half(c[0]), half(c[1])))
                .collect()
        })
        .collect();
    IntervalPresentation::new(s, points, unions).expect("generated unions are disjoint")
}

fn half(t: usize) -> Rational {
    Rational::new(BigInt::from(2 * t as i64 - 1), BigInt::from(2))
}
