use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Side};
use crate::measures::{type_partition, WeightedMeasure};
use crate::par;
use crate::ratio::{self, Rational};
use crate::scaled::{self, Eps, Masses, Scalar};
use crate::tameness::{vc_dimension, TraceSide, DEFAULT_VC_CAP};
use crate::verify;

use super::stable::group_by_pattern;
use super::{BiPartition, Mode, Provenance};

/// Draws beyond this are not attempted in a single round.
const MAX_SAMPLE: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NipOptions {
    /// Sample size is `⌈sample_c · d / ε²⌉` for VC estimate `d`.
    pub sample_c: u64,
    /// Rounds with a doubled sample after the first.
    pub max_retries: usize,
    /// Cap on the number of parts per side; the lightest parts are merged.
    pub max_parts: Option<usize>,
    pub vc_cap: usize,
}

impl Default for NipOptions {
    fn default() -> Self {
        NipOptions {
            sample_c: 8,
            max_retries: 5,
            max_parts: None,
            vc_cap: DEFAULT_VC_CAP,
        }
    }
}

/// A partition in which the pairs that are not `ε`-homogeneous carry total
/// `μ⊗ν` mass below `ε`.
///
/// Parameters `B ⊆ W` are drawn from `ν` with a seeded ChaCha8 stream; `V` is
/// split into the type atoms over `B` and `W` is grouped by whether each
/// column is dense, sparse or neither on every `V`-part. Every pair that is
/// not strictly homogeneous is listed as exceptional. If the exceptional mass
/// is not below `ε` the sample is doubled, up to `max_retries` times; the best
/// round is returned with `provenance.budget_met` telling whether it passed.
/// Same inputs and seed give the same output.
pub fn nip_partition(
    g: &BipartiteGraph,
    eps: &Rational,
    mu: &WeightedMeasure,
    nu: &WeightedMeasure,
    seed: u64,
    opts: &NipOptions,
) -> Result<BiPartition> {
    if !ratio::in_open_unit(eps) {
        return Err(Error::Input(format!(
            "epsilon must lie in (0, 1), got {}",
            ratio::format(eps)
        )));
    }
    if opts.sample_c == 0 {
        return Err(Error::Input("sample constant must be positive".into()));
    }
    if opts.max_parts == Some(0) {
        return Err(Error::Input("max_parts must be positive".into()));
    }
    mu.check_side(Side::V, g.n())?;
    nu.check_side(Side::W, g.m())?;
    if g.m() == 0 || g.n() == 0 {
        return Err(Error::Domain("graph has an empty side".into()));
    }

    let d = vc_dimension(g, opts.vc_cap, TraceSide::ColumnsOnV).dim.value.max(1);
    let base = sample_size(opts.sample_c, d, eps);
    let mut sampler = Sampler::new(nu, seed);
    let support = nu.support();
    let mut best: Option<(Rational, BiPartition)> = None;
    let mut rounds = 0;
    let mut size = base;
    for round in 0..=opts.max_retries {
        rounds = round;
        let params = sampler.draw(size, &support);
        let candidate = build(g, eps, mu, nu, &params, opts.max_parts)?;
        let report = verify::check_nip(g, &candidate, eps, mu, nu)?;
        let covered = params.len() == support.count();
        let better = best.as_ref().is_none_or(|(m, _)| report.exceptional_mass < *m);
        if better {
            let mut p = candidate;
            p.provenance.params = Some(params);
            p.provenance.sample_size = Some(size);
            p.provenance.budget_met = Some(report.pass);
            best = Some((report.exceptional_mass, p));
        }
        if report.pass || covered {
            break;
        }
        size = size.saturating_mul(2).min(MAX_SAMPLE);
    }
    let (_, mut out) = best.expect("at least one round");
    out.provenance.seed = Some(seed);
    out.provenance.sample_c = Some(opts.sample_c);
    out.provenance.vc_estimate = Some(d);
    out.provenance.retries = Some(rounds);
    out.provenance.max_parts = opts.max_parts;
    Ok(out)
}

fn sample_size(c: u64, d: usize, eps: &Rational) -> usize {
    // ⌈c·d·q² / p²⌉
    let p = eps.numer().to_biguint().expect("positive");
    let q = eps.denom().to_biguint().expect("positive");
    let num = BigUint::from(c) * BigUint::from(d) * &q * &q;
    let den = &p * &p;
    let s = (num + &den - 1u32) / den;
    s.to_usize().unwrap_or(MAX_SAMPLE).clamp(1, MAX_SAMPLE)
}

enum Weights {
    Uniform(usize),
    Exact(WeightedIndex<u64>),
    // only when scaled weights overflow u64; affects which sample is drawn,
    // never a verdict
    Approx(WeightedIndex<f64>),
}

struct Sampler {
    rng: ChaCha8Rng,
    weights: Weights,
}

impl Sampler {
    fn new(nu: &WeightedMeasure, seed: u64) -> Self {
        let weights = if nu.is_uniform() {
            Weights::Uniform(nu.len())
        } else {
            let exact: Option<Vec<u64>> = (0..nu.len()).map(|b| nu.weight_num(b).to_u64()).collect();
            match exact {
                Some(w) => Weights::Exact(WeightedIndex::new(w).expect("a measure has positive mass")),
                None => {
                    let w: Vec<f64> = nu.weights().iter().map(|r| r.to_f64().unwrap_or(0.0)).collect();
                    Weights::Approx(WeightedIndex::new(w).expect("a measure has positive mass"))
                }
            }
        };
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            weights,
        }
    }

    /// `size` draws, deduplicated and sorted; stops early once every vertex
    /// of `support` has been seen.
    fn draw(&mut self, size: usize, support: &BitSet) -> Vec<usize> {
        let mut seen = BitSet::new(support.len());
        let mut distinct = 0;
        let target = support.count();
        for _ in 0..size {
            let b = match &self.weights {
                Weights::Uniform(m) => self.rng.gen_range(0..*m),
                Weights::Exact(w) => w.sample(&mut self.rng),
                Weights::Approx(w) => w.sample(&mut self.rng),
            };
            if !seen.contains(b) {
                seen.insert(b);
                distinct += 1;
                if distinct == target {
                    break;
                }
            }
        }
        seen.to_vec()
    }
}

fn build(
    g: &BipartiteGraph,
    eps: &Rational,
    mu: &WeightedMeasure,
    nu: &WeightedMeasure,
    params: &[usize],
    max_parts: Option<usize>,
) -> Result<BiPartition> {
    let atoms: Vec<BitSet> = type_partition(g, params)?.into_iter().map(|a| a.members).collect();
    let parts_v = cap_parts(atoms, max_parts, mu);
    let keys = match (scaled::small_masses(mu), scaled::small_eps(eps)) {
        (Some(m), Some(e)) => column_patterns(g, &parts_v, &m, &e),
        _ => column_patterns(g, &parts_v, &scaled::big_masses(mu), &scaled::big_eps(eps).expect("positive")),
    };
    let parts_w = cap_parts(group_by_pattern(g.m(), &keys), max_parts, nu);
    let mut p = BiPartition::from_sets(
        &parts_v,
        &parts_w,
        Vec::new(),
        Mode::Nip,
        eps.clone(),
        Provenance {
            engine: "nip".into(),
            ..Provenance::default()
        },
    );
    let classes = verify::classify(g, &p, Mode::Nip, eps, mu, nu)?;
    p.exceptional = classes
        .iter()
        .enumerate()
        .flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_eps_homogeneous())
                .map(move |(j, _)| (i, j))
        })
        .collect();
    Ok(p)
}

/// Per column and `V`-part: 1 if the column is dense (`≥ 1-ε`), 0 if sparse
/// (`≤ ε`), 2 otherwise or when the part has no mass.
fn column_patterns<N: Scalar>(g: &BipartiteGraph, parts: &[BitSet], mu: &Masses<N>, eps: &Eps<N>) -> Vec<Vec<u8>> {
    let totals: Vec<N> = parts.iter().map(|p| mu.of(p)).collect();
    par::map(g.m(), |b| {
        parts
            .iter()
            .zip(&totals)
            .map(|(p, t)| {
                if t.is_zero() {
                    return 2;
                }
                let x = mu.of_and(p, g.col(b));
                if eps.le(&(t.clone() - x.clone()), t) {
                    1
                } else if eps.le(&x, t) {
                    0
                } else {
                    2
                }
            })
            .collect()
    })
}

/// Keeps the `max - 1` heaviest parts (earlier parts win ties) and merges the
/// rest into one; parts end up ordered by first member.
fn cap_parts(parts: Vec<BitSet>, max: Option<usize>, measure: &WeightedMeasure) -> Vec<BitSet> {
    let Some(max) = max else { return parts };
    if parts.len() <= max {
        return parts;
    }
    let masses: Vec<BigUint> = parts.iter().map(|p| measure.mass_num(p)).collect();
    let mut order: Vec<usize> = (0..parts.len()).collect();
    order.sort_by(|&x, &y| masses[y].cmp(&masses[x]).then(x.cmp(&y)));
    let mut rest = BitSet::new(parts[0].len());
    for &i in &order[max - 1..] {
        rest.or_assign(&parts[i]);
    }
    let mut out: Vec<BitSet> = order[..max - 1].iter().map(|&i| parts[i].clone()).collect();
    out.push(rest);
    out.sort_by_key(|p| p.first());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};
    use crate::ratio::ratio;

    fn uni(g: &BipartiteGraph) -> (WeightedMeasure, WeightedMeasure) {
        (
            WeightedMeasure::uniform(g, Side::V).unwrap(),
            WeightedMeasure::uniform(g, Side::W).unwrap(),
        )
    }

    #[test]
    fn deterministic_for_a_seed() {
        let g = generate(&Family::Random { n: 40, m: 40, p: ratio(1, 2), seed: 3 }).unwrap();
        let (mu, nu) = uni(&g);
        let opts = NipOptions::default();
        let a = nip_partition(&g, &ratio(1, 4), &mu, &nu, 9, &opts).unwrap();
        let b = nip_partition(&g, &ratio(1, 4), &mu, &nu, 9, &opts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn half_graph_meets_budget() {
        let g = generate(&Family::Half { k: 64 }).unwrap();
        let (mu, nu) = uni(&g);
        let p = nip_partition(&g, &ratio(1, 10), &mu, &nu, 1, &NipOptions::default()).unwrap();
        assert_eq!(p.provenance.budget_met, Some(true));
        assert!(verify::check_nip(&g, &p, &ratio(1, 10), &mu, &nu).unwrap().pass);
    }

    #[test]
    fn part_cap_is_respected() {
        let g = generate(&Family::Parity { d: 4 }).unwrap();
        let (mu, nu) = uni(&g);
        let opts = NipOptions {
            max_parts: Some(3),
            ..NipOptions::default()
        };
        let p = nip_partition(&g, &ratio(1, 10), &mu, &nu, 0, &opts).unwrap();
        assert!(p.parts_v.len() <= 3 && p.parts_w.len() <= 3);
        assert_eq!(p.provenance.budget_met, Some(false));
    }

    #[test]
    fn sample_size_formula() {
        assert_eq!(sample_size(8, 1, &ratio(1, 10)), 800);
        assert_eq!(sample_size(1, 1, &ratio(2, 3)), 3);
    }

    #[test]
    fn cap_keeps_heaviest() {
        let mu = WeightedMeasure::uniform_on(Side::V, 6).unwrap();
        let parts = vec![
            BitSet::from_indices(6, [0]),
            BitSet::from_indices(6, [1, 2, 3]),
            BitSet::from_indices(6, [4]),
            BitSet::from_indices(6, [5]),
        ];
        let out = cap_parts(parts, Some(2), &mu);
        assert_eq!(out, vec![BitSet::from_indices(6, [0, 4, 5]), BitSet::from_indices(6, [1, 2, 3])]);
    }
}
