//! Exhaustive minimum-size partitions on tiny graphs, under counting measures.
//!
//! Set partitions of each side are enumerated as restricted growth strings in
//! lexicographic order. The optimum minimises `|P_V| + |P_W|`, then `|P_V|`,
//! and among those returns the first witness in that order (`P_V` first,
//! then `P_W`).
//!
//! For the stable condition with `ε < 1/2` the best `W`-partition for a given
//! `P_V` is forced: two columns can share a part iff they have the same
//! dense/sparse signature on every `V_i`. Otherwise both sides are enumerated,
//! pruned by an upper bound on the homogeneous mass a one-sided partition can
//! achieve.

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::par;
use crate::partition::{BiPartition, Mode, Provenance};
use crate::ratio::Rational;

pub const BRUTE_MAX_SIDE: usize = 16;
/// Set partitions allowed per side.
pub const BRUTE_MAX_PARTITIONS: u128 = 1 << 23;
const CHUNK: usize = 1 << 15;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteForceResult {
    /// `(|P_V|, |P_W|)` of the optimum, if any partition within `max_parts` works.
    pub counts: Option<(usize, usize)>,
    pub witness: Option<BiPartition>,
    /// `V`-partitions examined.
    pub examined: u64,
}

/// Number of set partitions of an `n`-set into at most `k` blocks.
pub fn partition_count(n: usize, k: usize) -> u128 {
    // s[j] = S(i, j)
    let mut s = vec![0u128; k + 1];
    s[0] = 1;
    for _ in 0..n {
        for j in (1..=k).rev() {
            s[j] = s[j].saturating_mul(j as u128).saturating_add(s[j - 1]);
        }
        s[0] = 0;
    }
    s[1..].iter().fold(0u128, |a, &x| a.saturating_add(x))
}

/// Calls `f(string, blocks)` for each restricted growth string of length `n`
/// with at most `k` blocks, in lexicographic order. Entry `i` sits in bits
/// `4i..4i+4`.
fn for_each_rgs(n: usize, k: usize, f: &mut dyn FnMut(u64, usize)) {
    fn rec(i: usize, top: usize, s: u64, n: usize, k: usize, f: &mut dyn FnMut(u64, usize)) {
        if i == n {
            f(s, top + 1);
            return;
        }
        for v in 0..=(top + 1).min(k - 1) {
            rec(i + 1, top.max(v), s | (v as u64) << (4 * i), n, k, f);
        }
    }
    rec(1, 0, 0, n, k, f);
}

fn blocks(s: u64, n: usize, parts: usize) -> Vec<u32> {
    let mut out = vec![0u32; parts];
    for i in 0..n {
        out[((s >> (4 * i)) & 15) as usize] |= 1 << i;
    }
    out
}

struct Tiny {
    n: usize,
    m: usize,
    rows: Vec<u32>,
    cols: Vec<u32>,
    p: u128,
    q: u128,
}

impl Tiny {
    /// Strict `ε`-homogeneity of `x` edges out of `tot` (`tot > 0`).
    fn eps_hom(&self, x: u128, tot: u128) -> bool {
        x * self.q < self.p * tot || (tot - x) * self.q < self.p * tot
    }

    /// Upper bound on `Σ_i |V_i| · |{W-vertices in parts homogeneous with V_i}|`.
    /// Parts homogeneous with `V_i` on the sparse side form a set of columns
    /// whose average edge count is below `ε·|V_i|`, so at most the longest such
    /// prefix of the columns sorted by count; likewise on the dense side.
    fn hom_bound(&self, parts: &[u32], lines: &[u32], other: usize, distal: bool) -> u128 {
        let mut total = 0u128;
        let mut c = vec![0u128; lines.len()];
        for &part in parts {
            let s = part.count_ones() as u128;
            for (b, &line) in lines.iter().enumerate() {
                c[b] = (line & part).count_ones() as u128;
            }
            let k = if distal {
                c.iter().filter(|&&x| x == 0 || x == s).count() as u128
            } else {
                c.sort_unstable();
                let mut sparse = 0u128;
                let mut sum = 0u128;
                for (t, &x) in c.iter().enumerate() {
                    sum += x;
                    if sum * self.q < self.p * (t as u128 + 1) * s {
                        sparse = t as u128 + 1;
                    }
                }
                let mut dense = 0u128;
                let mut miss = 0u128;
                for (t, &x) in c.iter().rev().enumerate() {
                    miss += s - x;
                    if miss * self.q < self.p * (t as u128 + 1) * s {
                        dense = t as u128 + 1;
                    }
                }
                (sparse + dense).min(other as u128)
            };
            total += s * k;
        }
        total
    }

    fn bound_allows(&self, hom: u128) -> bool {
        // exceptional = nm - hom must be < ε nm
        let nm = (self.n * self.m) as u128;
        (nm - hom.min(nm)) * self.q < self.p * nm
    }

    /// Non-homogeneous pairs if their total mass is below `ε`.
    fn exceptional(&self, vs: &[u32], ws: &[u32], distal: bool) -> Option<Vec<(usize, usize)>> {
        let nm = (self.n * self.m) as u128;
        let mut bad = 0u128;
        let mut pairs = Vec::new();
        for (i, &vi) in vs.iter().enumerate() {
            let s = vi.count_ones() as u128;
            for (j, &wj) in ws.iter().enumerate() {
                let t = wj.count_ones() as u128;
                let e: u128 = (0..self.n)
                    .filter(|&a| vi >> a & 1 == 1)
                    .map(|a| (self.rows[a] & wj).count_ones() as u128)
                    .sum();
                let tot = s * t;
                let hom = if distal {
                    e == 0 || e == tot
                } else {
                    self.eps_hom(e, tot)
                };
                if !hom {
                    bad += tot;
                    if bad * self.q >= self.p * nm {
                        return None;
                    }
                    pairs.push((i, j));
                }
            }
        }
        Some(pairs)
    }

    /// For the stable condition: per `(i, b)`, bit 0 = dense allowed, bit 1 =
    /// sparse allowed (weak inequalities); `None` if some column is neither.
    fn stable_signatures(&self, vs: &[u32]) -> Option<Vec<Vec<u8>>> {
        let mut sig = vec![vec![0u8; vs.len()]; self.m];
        for (i, &vi) in vs.iter().enumerate() {
            let s = vi.count_ones() as u128;
            for (b, sig_b) in sig.iter_mut().enumerate() {
                let x = (self.cols[b] & vi).count_ones() as u128;
                let dense = (s - x) * self.q <= self.p * s;
                let sparse = x * self.q <= self.p * s;
                let a = u8::from(dense) | u8::from(sparse) << 1;
                if a == 0 {
                    return None;
                }
                sig_b[i] = a;
            }
        }
        Some(sig)
    }
}

/// Minimum total part count over all partitions with at most `max_parts`
/// parts per side that pass the `mode` check under counting measures.
///
/// Refuses graphs with more than 16 vertices on a side or more than `2^23`
/// candidate partitions per side.
pub fn brute_force_optimal(
    g: &BipartiteGraph,
    eps: &Rational,
    mode: Mode,
    max_parts: usize,
) -> Result<BruteForceResult> {
    let (n, m) = (g.n(), g.m());
    if n == 0 || m == 0 {
        return Err(Error::Domain("graph has an empty side".into()));
    }
    if n > BRUTE_MAX_SIDE || m > BRUTE_MAX_SIDE {
        return Err(Error::Refused(format!(
            "brute force is limited to {BRUTE_MAX_SIDE} vertices per side, got {n}x{m}"
        )));
    }
    if max_parts == 0 {
        return Err(Error::Input("max_parts must be positive".into()));
    }
    let k = max_parts.min(n.max(m));
    for (side, len) in [("V", n), ("W", m)] {
        let c = partition_count(len, k.min(len));
        if c > BRUTE_MAX_PARTITIONS {
            return Err(Error::Refused(format!(
                "{c} partitions of {side} with at most {k} parts exceeds {BRUTE_MAX_PARTITIONS}"
            )));
        }
    }
    if eps.is_negative() {
        return Err(Error::Input("epsilon must be nonnegative".into()));
    }
    let (p, q) = match (eps.numer().to_u64(), eps.denom().to_u64()) {
        (Some(p), Some(q)) if p < 1 << 32 && q < 1 << 32 => (p as u128, q as u128),
        _ => return Err(Error::Refused("epsilon numerator and denominator must be below 2^32".into())),
    };
    let to_mask = |s: &BitSet| s.iter().fold(0u32, |acc, i| acc | 1 << i);
    let t = Tiny {
        n,
        m,
        rows: g.rows().iter().map(to_mask).collect(),
        cols: g.cols().iter().map(to_mask).collect(),
        p,
        q,
    };
    let kv = k.min(n);
    let kw = k.min(m);
    let (best, examined) = match mode {
        Mode::Stable => search_stable(&t, kv, kw),
        Mode::Nip | Mode::Distal => search_exceptional(&t, kv, kw, mode == Mode::Distal),
    };
    let witness = best.map(|b| {
        let vs = blocks(b.v, n, b.pv);
        let ws = blocks(b.w, m, b.pw);
        let sets = |masks: &[u32], len: usize| -> Vec<BitSet> {
            masks
                .iter()
                .map(|&x| BitSet::from_indices(len, (0..len).filter(|&i| x >> i & 1 == 1)))
                .collect()
        };
        BiPartition::from_sets(
            &sets(&vs, n),
            &sets(&ws, m),
            b.exceptional,
            mode,
            eps.clone(),
            Provenance {
                engine: "brute-force".into(),
                max_parts: Some(max_parts),
                ..Default::default()
            },
        )
    });
    Ok(BruteForceResult {
        counts: witness.as_ref().map(|w| (w.parts_v.len(), w.parts_w.len())),
        witness,
        examined,
    })
}

#[derive(Clone, Debug)]
struct Found {
    /// lexicographic rank of the `V` string, for tie-breaks
    rank: u64,
    v: u64,
    pv: usize,
    w: u64,
    pw: usize,
    exceptional: Vec<(usize, usize)>,
}

impl Found {
    fn key(&self) -> (usize, usize, u64) {
        (self.pv + self.pw, self.pv, self.rank)
    }
}

fn keep_better(best: &mut Option<Found>, cand: Option<Found>) {
    if let Some(c) = cand {
        if best.as_ref().is_none_or(|b| c.key() < b.key()) {
            *best = Some(c);
        }
    }
}

/// Streams `V`-strings in lexicographic order through `eval` in parallel
/// chunks; returns the best candidate and the number of strings seen.
fn stream_v(
    n: usize,
    kv: usize,
    eval: &(dyn Fn(u64, u64, usize) -> Option<Found> + Sync),
) -> (Option<Found>, u64) {
    let mut best: Option<Found> = None;
    let mut buf: Vec<(u64, u64, usize)> = Vec::with_capacity(CHUNK);
    let mut rank = 0u64;
    let flush = |buf: &mut Vec<(u64, u64, usize)>, best: &mut Option<Found>| {
        let found = par::map(buf.len(), |x| {
            let (r, s, pv) = buf[x];
            eval(r, s, pv)
        });
        for f in found {
            keep_better(best, f);
        }
        buf.clear();
    };
    for_each_rgs(n, kv, &mut |s, pv| {
        buf.push((rank, s, pv));
        rank += 1;
        if buf.len() == CHUNK {
            flush(&mut buf, &mut best);
        }
    });
    flush(&mut buf, &mut best);
    (best, rank)
}

fn search_stable(t: &Tiny, kv: usize, kw: usize) -> (Option<Found>, u64) {
    // W-strings ordered by block count then lexicographically, for the general case
    let forced = t.p * 2 < t.q;
    let w_all: Vec<(u64, usize)> = if forced {
        Vec::new()
    } else {
        let mut all = Vec::new();
        for_each_rgs(t.m, kw, &mut |s, pw| all.push((s, pw)));
        all.sort_by_key(|&(_, pw)| pw);
        all
    };
    let eval = |rank: u64, s: u64, pv: usize| -> Option<Found> {
        let vs = blocks(s, t.n, pv);
        let sig = t.stable_signatures(&vs)?;
        let (w, pw) = if forced {
            // group identical signatures, numbered by first occurrence
            let mut seen: Vec<&Vec<u8>> = Vec::new();
            let mut w = 0u64;
            for (b, sb) in sig.iter().enumerate() {
                let id = match seen.iter().position(|x| *x == sb) {
                    Some(id) => id,
                    None => {
                        seen.push(sb);
                        seen.len() - 1
                    }
                };
                w |= (id as u64) << (4 * b);
            }
            if seen.len() > kw {
                return None;
            }
            (w, seen.len())
        } else {
            *w_all.iter().find(|&&(w, pw)| {
                blocks(w, t.m, pw).iter().all(|&wj| {
                    (0..vs.len()).all(|i| {
                        let common = (0..t.m)
                            .filter(|&b| wj >> b & 1 == 1)
                            .fold(3u8, |acc, b| acc & sig[b][i]);
                        common != 0
                    })
                })
            })?
        };
        Some(Found {
            rank,
            v: s,
            pv,
            w,
            pw,
            exceptional: Vec::new(),
        })
    };
    stream_v(t.n, kv, &eval)
}

fn search_exceptional(t: &Tiny, kv: usize, kw: usize, distal: bool) -> (Option<Found>, u64) {
    let mut w_ok: Vec<(u64, usize)> = Vec::new();
    for_each_rgs(t.m, kw, &mut |s, pw| {
        let ws = blocks(s, t.m, pw);
        if t.bound_allows(t.hom_bound(&ws, &t.rows, t.n, distal)) {
            w_ok.push((s, pw));
        }
    });
    w_ok.sort_by_key(|&(_, pw)| pw);
    let eval = |rank: u64, s: u64, pv: usize| -> Option<Found> {
        let vs = blocks(s, t.n, pv);
        if !t.bound_allows(t.hom_bound(&vs, &t.cols, t.m, distal)) {
            return None;
        }
        w_ok.iter().find_map(|&(w, pw)| {
            let ws = blocks(w, t.m, pw);
            t.exceptional(&vs, &ws, distal).map(|exceptional| Found {
                rank,
                v: s,
                pv,
                w,
                pw,
                exceptional,
            })
        })
    };
    stream_v(t.n, kv, &eval)
}
