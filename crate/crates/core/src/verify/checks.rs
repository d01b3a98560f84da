use num_bigint::BigUint;
use num_traits::{Signed, Zero};

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Side};
use crate::measures::WeightedMeasure;
use crate::partition::{BiPartition, Mode};
use crate::par;
use crate::ratio::{self, Rational};
use crate::scaled::{self, Eps, Masses, Scalar};

use super::report::{ClassCounts, PairClass, RegularityReport, Witness, GRID_LIMIT};

/// Entry `(i, j)` is `(μ⊗ν)((V_i × W_j) ∩ R) / (μ(V_i)·ν(W_j))`, or `None`
/// when that denominator is zero.
pub fn density_matrix(
    g: &BipartiteGraph,
    p: &BiPartition,
    mu: &WeightedMeasure,
    nu: &WeightedMeasure,
) -> Result<Vec<Vec<Option<Rational>>>> {
    p.validate(g)?;
    let r = evaluate(g, p, Mode::Nip, &Rational::zero(), mu, nu, true)?;
    Ok(r.densities.expect("requested"))
}

/// Per column: for every pair `(i, j)` and every `b ∈ W_j`, either
/// `μ(V_i ∖ N(b)) <= ε·μ(V_i)` for all such `b`, or `μ(V_i ∩ N(b)) <= ε·μ(V_i)`
/// for all of them. No exceptional pairs are allowed. `W` carries the
/// counting measure for the reported densities.
pub fn check_stable(
    g: &BipartiteGraph,
    p: &BiPartition,
    eps: &Rational,
    mu: &WeightedMeasure,
) -> Result<RegularityReport> {
    let nu = WeightedMeasure::uniform(g, Side::W)?;
    check(g, p, Mode::Stable, eps, mu, &nu)
}

/// Exceptional mass `< ε` and every other pair has edge mass or non-edge mass
/// `< ε·μ(V_i)·ν(W_j)`.
pub fn check_nip(
    g: &BipartiteGraph,
    p: &BiPartition,
    eps: &Rational,
    mu: &WeightedMeasure,
    nu: &WeightedMeasure,
) -> Result<RegularityReport> {
    check(g, p, Mode::Nip, eps, mu, nu)
}

/// Exceptional mass `< ε` and every other pair is entirely inside or entirely
/// outside `R`.
pub fn check_distal(
    g: &BipartiteGraph,
    p: &BiPartition,
    eps: &Rational,
    mu: &WeightedMeasure,
    nu: &WeightedMeasure,
) -> Result<RegularityReport> {
    check(g, p, Mode::Distal, eps, mu, nu)
}

/// Runs the check for `mode`. Errors only for unusable inputs (measures on
/// the wrong side, negative `ε`); a malformed partition is a failed verdict.
pub fn check(
    g: &BipartiteGraph,
    p: &BiPartition,
    mode: Mode,
    eps: &Rational,
    mu: &WeightedMeasure,
    nu: &WeightedMeasure,
) -> Result<RegularityReport> {
    let grid = p.parts_v.len().saturating_mul(p.parts_w.len()) <= GRID_LIMIT;
    evaluate(g, p, mode, eps, mu, nu, grid)
}

/// Pair classes under `mode`'s inequality, whatever the grid size.
pub(crate) fn classify(
    g: &BipartiteGraph,
    p: &BiPartition,
    mode: Mode,
    eps: &Rational,
    mu: &WeightedMeasure,
    nu: &WeightedMeasure,
) -> Result<Vec<Vec<PairClass>>> {
    p.validate(g)?;
    let r = evaluate(g, p, mode, eps, mu, nu, true)?;
    Ok(r.classes.expect("requested"))
}

fn evaluate(
    g: &BipartiteGraph,
    p: &BiPartition,
    mode: Mode,
    eps: &Rational,
    mu: &WeightedMeasure,
    nu: &WeightedMeasure,
    grid: bool,
) -> Result<RegularityReport> {
    if eps.is_negative() {
        return Err(Error::Input("epsilon must be nonnegative".into()));
    }
    mu.check_side(Side::V, g.n())?;
    nu.check_side(Side::W, g.m())?;
    if let Err(e) = p.validate(g) {
        return Ok(RegularityReport {
            mode,
            epsilon: eps.clone(),
            pass: false,
            witness: Some(Witness::InvalidPartition {
                reason: e.to_string(),
            }),
            parts_v: p.parts_v.len(),
            parts_w: p.parts_w.len(),
            exceptional_pairs: p.exceptional.len(),
            exceptional_mass: Rational::zero(),
            class_counts: ClassCounts::default(),
            densities: None,
            classes: None,
            provenance: p.provenance.clone(),
        });
    }
    let vs = p.sets_v(g.n());
    let ws = p.sets_w(g.m());
    let declared = p.exceptional_grid();
    let fast = match (
        scaled::small_masses(mu),
        scaled::small_masses(nu),
        scaled::small_eps(eps),
    ) {
        (Some(m), Some(n), Some(e)) if fits(&m, &n, &e) => Some((m, n, e)),
        _ => None,
    };
    let out = match fast {
        Some((m, n, e)) => Kernel {
            g,
            vs: &vs,
            ws: &ws,
            mu: m,
            nu: n,
            eps: e,
            mode,
            declared: &declared,
            grid,
        }
        .run(),
        None => Kernel::<BigUint> {
            g,
            vs: &vs,
            ws: &ws,
            mu: scaled::big_masses(mu),
            nu: scaled::big_masses(nu),
            eps: scaled::big_eps(eps).expect("nonnegative"),
            mode,
            declared: &declared,
            grid,
        }
        .run(),
    };
    Ok(RegularityReport {
        mode,
        epsilon: eps.clone(),
        pass: out.witness.is_none(),
        witness: out.witness,
        parts_v: vs.len(),
        parts_w: ws.len(),
        exceptional_pairs: out.exceptional_pairs,
        exceptional_mass: out.exceptional_mass,
        class_counts: out.counts,
        densities: out.densities,
        classes: out.classes,
        provenance: p.provenance.clone(),
    })
}

fn bits(x: u128) -> u32 {
    128 - x.leading_zeros()
}

/// `u128` is safe when `μtot · νtot · max(p, q)` stays below `2^127`.
fn fits(m: &Masses<u128>, n: &Masses<u128>, e: &Eps<u128>) -> bool {
    bits(m.total) + bits(n.total) + bits(e.p.max(e.q)) <= 126
}

struct Outcome {
    witness: Option<Witness>,
    exceptional_pairs: usize,
    exceptional_mass: Rational,
    counts: ClassCounts,
    densities: Option<Vec<Vec<Option<Rational>>>>,
    classes: Option<Vec<Vec<PairClass>>>,
}

struct RowOut<N> {
    classes: Vec<PairClass>,
    densities: Vec<Option<Rational>>,
    counts: ClassCounts,
    exceptional_mass: N,
    exceptional_pairs: usize,
    failure: Option<Witness>,
}

struct Kernel<'a, N> {
    g: &'a BipartiteGraph,
    vs: &'a [BitSet],
    ws: &'a [BitSet],
    mu: Masses<N>,
    nu: Masses<N>,
    eps: Eps<N>,
    mode: Mode,
    declared: &'a [Vec<bool>],
    grid: bool,
}

impl<N: Scalar> Kernel<'_, N> {
    fn run(&self) -> Outcome {
        let rows = par::map(self.vs.len(), |i| self.row(i));
        let mut counts = ClassCounts::default();
        let mut mass = N::zero();
        let mut pairs = 0;
        let mut witness = None;
        let mut densities = self.grid.then(Vec::new);
        let mut classes = self.grid.then(Vec::new);
        for r in rows {
            counts.merge(&r.counts);
            mass = mass + r.exceptional_mass;
            pairs += r.exceptional_pairs;
            if witness.is_none() {
                witness = r.failure;
            }
            if let Some(d) = densities.as_mut() {
                d.push(r.densities);
            }
            if let Some(c) = classes.as_mut() {
                c.push(r.classes);
            }
        }
        let whole = self.mu.total.clone() * self.nu.total.clone();
        let exceptional_mass = ratio::from_biguints(mass.to_big(), whole.to_big());
        if witness.is_none() && self.mode != Mode::Stable && !self.eps.lt(&mass, &whole) {
            witness = Some(Witness::ExceptionalMass {
                mass: exceptional_mass.clone(),
            });
        }
        Outcome {
            witness,
            exceptional_pairs: pairs,
            exceptional_mass,
            counts,
            densities,
            classes,
        }
    }

    fn row(&self, i: usize) -> RowOut<N> {
        let g = self.g;
        let vi = &self.vs[i];
        let size = vi.count();
        let cnt: Vec<usize> = (0..g.m()).map(|b| vi.intersection_count(g.col(b))).collect();
        let mass: Vec<N> = (0..g.m())
            .map(|b| {
                if self.mu.is_uniform() {
                    N::from(cnt[b] as u64)
                } else {
                    self.mu.of_and(vi, g.col(b))
                }
            })
            .collect();
        let mi = self.mu.of(vi);
        let strict = self.mode != Mode::Stable;
        let mut out = RowOut {
            classes: Vec::new(),
            densities: Vec::new(),
            counts: ClassCounts::default(),
            exceptional_mass: N::zero(),
            exceptional_pairs: 0,
            failure: None,
        };
        for (j, wj) in self.ws.iter().enumerate() {
            let c: usize = wj.iter().map(|b| cnt[b]).sum();
            let e: N = wj.iter().map(|b| self.nu.weight(b) * mass[b].clone()).sum();
            let tot = mi.clone() * self.nu.of(wj);
            let class = if tot.is_zero() {
                PairClass::Undefined
            } else if c == size * wj.count() {
                PairClass::HomEdge
            } else if c == 0 {
                PairClass::HomNonEdge
            } else {
                let non = tot.clone() - e.clone();
                let test = |x: &N| {
                    if strict {
                        self.eps.lt(x, &tot)
                    } else {
                        self.eps.le(x, &tot)
                    }
                };
                let (dense, sparse) = (test(&non), test(&e));
                if dense && (!sparse || e >= non) {
                    PairClass::EpsDense
                } else if sparse {
                    PairClass::EpsSparse
                } else {
                    PairClass::Irregular
                }
            };
            out.counts.add(class);
            let declared = self.declared[i][j];
            let exceptional = declared || class == PairClass::Undefined;
            if exceptional {
                out.exceptional_pairs += usize::from(declared);
                out.exceptional_mass = out.exceptional_mass.clone() + tot.clone();
            }
            if self.grid {
                out.classes.push(class);
                out.densities.push(
                    (!tot.is_zero()).then(|| ratio::from_biguints(e.to_big(), tot.to_big())),
                );
            }
            if out.failure.is_none() {
                out.failure = match self.mode {
                    Mode::Stable if declared => Some(Witness::DeclaredExceptional { pair: (i, j) }),
                    Mode::Stable => self.column_failure(i, j, wj, &mass, &mi),
                    _ if exceptional => None,
                    Mode::Nip if !class.is_eps_homogeneous() => Some(Witness::Pair {
                        pair: (i, j),
                        density: ratio::from_biguints(e.to_big(), tot.to_big()),
                        class,
                    }),
                    Mode::Distal if !class.is_homogeneous() => {
                        Some(self.offending_vertex(i, j, 2 * c >= size * wj.count()))
                    }
                    _ => None,
                };
            }
        }
        out
    }

    /// The per-column stable condition for one pair, weak inequalities.
    fn column_failure(
        &self,
        i: usize,
        j: usize,
        wj: &BitSet,
        mass: &[N],
        mi: &N,
    ) -> Option<Witness> {
        let dense = |b: usize| self.eps.le(&(mi.clone() - mass[b].clone()), mi);
        let sparse = |b: usize| self.eps.le(&mass[b], mi);
        let density = |b: usize| ratio::from_biguints(mass[b].to_big(), mi.to_big());
        if let Some(b) = wj.iter().find(|&b| !dense(b) && !sparse(b)) {
            return Some(Witness::Column {
                pair: (i, j),
                b,
                density: density(b),
                reason: "neither almost full nor almost empty".into(),
            });
        }
        if wj.iter().all(dense) || wj.iter().all(sparse) {
            return None;
        }
        let b0 = wj.first().expect("parts are nonempty");
        let (b, kind) = if dense(b0) {
            (wj.iter().find(|&b| !dense(b)).unwrap(), "almost empty")
        } else {
            (wj.iter().find(|&b| !sparse(b)).unwrap(), "almost full")
        };
        Some(Witness::Column {
            pair: (i, j),
            b,
            density: density(b),
            reason: format!("{kind}, unlike column {b0} of the same part"),
        })
    }

    /// An edge or non-edge against the majority inside `V_i × W_j`.
    fn offending_vertex(&self, i: usize, j: usize, mostly_edges: bool) -> Witness {
        let wj = &self.ws[j];
        for a in self.vs[i].iter() {
            let row = self.g.row(a);
            let hit = if mostly_edges {
                wj.and_not(row).first()
            } else {
                wj.and(row).first()
            };
            if let Some(b) = hit {
                return Witness::NotHomogeneous {
                    pair: (i, j),
                    a,
                    b,
                    edge: !mostly_edges,
                };
            }
        }
        unreachable!("pair is not homogeneous")
    }
}
