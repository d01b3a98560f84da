use num_traits::Signed;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, IntervalPresentation, Side};
use crate::measures::{type_partition, WeightedMeasure};
use crate::par;
use crate::ratio::{self, Rational};
use crate::verify;

use super::stable::group_by_pattern;
use super::{BiPartition, Mode, Provenance};

/// How a `V`-block meets one column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Cover {
    Full,
    Empty,
    Mixed,
}

/// A partition in which every non-exceptional pair is complete or empty and
/// the exceptional pairs carry uniform mass below `ε`.
///
/// Needs the graph's interval presentation. The points are cut into cells at
/// every interval endpoint, so no cell is split by any column. The exact
/// answer groups vertices by their full neighbourhoods and has no exceptional
/// pairs. For `ε < 1` coarser answers are tried: runs of adjacent cells are
/// packed into `t = 1, 2, 4, ...` blocks, blocks that meet every column the
/// same way are merged, and mixed pairs become exceptional. The first one
/// whose exceptional mass is below `ε` and which uses fewer parts than the
/// exact answer is returned; otherwise the exact answer is.
pub fn distal_partition(g: &BipartiteGraph, eps: &Rational) -> Result<BiPartition> {
    if !eps.is_positive() {
        return Err(Error::Input(format!(
            "epsilon must be positive, got {}",
            ratio::format(eps)
        )));
    }
    let Some(pres) = g.presentation() else {
        return Err(Error::Unsupported(
            "distal partitions need an interval presentation; use the nip engine".into(),
        ));
    };
    let mu = WeightedMeasure::uniform(g, Side::V)?;
    let nu = WeightedMeasure::uniform(g, Side::W)?;
    let cells = cells(pres);

    let all: Vec<usize> = (0..g.m()).collect();
    let rows: Vec<BitSet> = type_partition(g, &all)?.into_iter().map(|a| a.members).collect();
    let mut parts_v = sort_parts(rows);
    let mut parts_w = group_by_pattern(g.m(), g.cols());
    let mut exceptional = Vec::new();
    let mut blocks_used = cells.len();
    let exact_total = parts_v.len() + parts_w.len();

    if *eps < Rational::from_integer(1.into()) {
        let mut t = 1;
        while t < cells.len() {
            let blocks = pack(&cells, g.n().div_ceil(t));
            let (pv, pw, exc) = coarsen(g, &blocks);
            if pv.len() + pw.len() < exact_total && mass(&pv, &pw, &exc, g) < *eps {
                parts_v = pv;
                parts_w = pw;
                exceptional = exc;
                blocks_used = blocks.len();
                break;
            }
            t *= 2;
        }
    }

    let out = BiPartition::from_sets(
        &parts_v,
        &parts_w,
        exceptional,
        Mode::Distal,
        eps.clone(),
        Provenance {
            engine: "distal".into(),
            blocks: Some(blocks_used),
            cells: Some(cells.len()),
            ..Provenance::default()
        },
    );
    let report = verify::check_distal(g, &out, eps, &mu, &nu)?;
    if !report.pass {
        return Err(Error::Domain(format!(
            "distal engine produced a partition that fails verification: {}",
            report.witness.map(|w| w.to_string()).unwrap_or_default()
        )));
    }
    Ok(out)
}

/// Points in sorted order, cut wherever an interval starts or ends between
/// two neighbours.
fn cells(pres: &IntervalPresentation) -> Vec<Vec<usize>> {
    let pts = pres.points();
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&x, &y| pts[x].cmp(&pts[y]).then(x.cmp(&y)));
    let mut los: Vec<&Rational> = pres.unions().iter().flatten().map(|iv| &iv.lo).collect();
    let mut his: Vec<&Rational> = pres.unions().iter().flatten().map(|iv| &iv.hi).collect();
    los.sort();
    his.sort();
    // some x in xs with lo < x <= hi (or lo <= x < hi when `closed_low`)
    let any_in = |xs: &[&Rational], lo: &Rational, hi: &Rational, closed_low: bool| {
        let start = if closed_low {
            xs.partition_point(|x| *x < lo)
        } else {
            xs.partition_point(|x| *x <= lo)
        };
        xs.get(start).is_some_and(|x| if closed_low { *x < hi } else { *x <= hi })
    };
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (k, &a) in order.iter().enumerate() {
        let cut = k == 0 || {
            let (p, q) = (&pts[order[k - 1]], &pts[a]);
            p != q && (any_in(&los, p, q, false) || any_in(&his, p, q, true))
        };
        if cut {
            out.push(Vec::new());
        }
        out.last_mut().expect("pushed").push(a);
    }
    out
}

/// Greedy runs of adjacent cells of total size at most `cap`; a larger cell
/// stands alone.
fn pack(cells: &[Vec<usize>], cap: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    for c in cells {
        if !cur.is_empty() && cur.len() + c.len() > cap {
            out.push(std::mem::take(&mut cur));
        }
        cur.extend_from_slice(c);
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn cover(block: &BitSet, col: &BitSet) -> Cover {
    let k = block.intersection_count(col);
    if k == 0 {
        Cover::Empty
    } else if k == block.count() {
        Cover::Full
    } else {
        Cover::Mixed
    }
}

type Coarse = (Vec<BitSet>, Vec<BitSet>, Vec<(usize, usize)>);

fn coarsen(g: &BipartiteGraph, blocks: &[Vec<usize>]) -> Coarse {
    let sets: Vec<BitSet> = blocks
        .iter()
        .map(|b| BitSet::from_indices(g.n(), b.iter().copied()))
        .collect();
    let patterns: Vec<Vec<Cover>> = par::map(sets.len(), |i| g.cols().iter().map(|c| cover(&sets[i], c)).collect());
    let parts_v: Vec<BitSet> = group_by_pattern(sets.len(), &patterns)
        .into_iter()
        .map(|grp| {
            let mut u = BitSet::new(g.n());
            for i in grp.iter() {
                u.or_assign(&sets[i]);
            }
            u
        })
        .collect();
    let parts_v = sort_parts(parts_v);
    let col_patterns: Vec<Vec<Cover>> = par::map(g.m(), |b| parts_v.iter().map(|p| cover(p, g.col(b))).collect());
    let parts_w = group_by_pattern(g.m(), &col_patterns);
    let exceptional = parts_w
        .iter()
        .enumerate()
        .flat_map(|(j, w)| {
            let b = w.first().expect("nonempty part");
            col_patterns[b]
                .iter()
                .enumerate()
                .filter(|(_, c)| **c == Cover::Mixed)
                .map(move |(i, _)| (i, j))
        })
        .collect();
    (parts_v, parts_w, exceptional)
}

fn mass(pv: &[BitSet], pw: &[BitSet], exc: &[(usize, usize)], g: &BipartiteGraph) -> Rational {
    let cells: usize = exc.iter().map(|&(i, j)| pv[i].count() * pw[j].count()).sum();
    ratio::from_counts(cells, g.n() * g.m())
}

fn sort_parts(mut parts: Vec<BitSet>) -> Vec<BitSet> {
    parts.sort_by_key(|p| p.first());
    parts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family, Interval};
    use crate::ratio::ratio;

    fn pres(points: &[i64], ivs: &[(i64, i64)]) -> IntervalPresentation {
        IntervalPresentation::new(
            1,
            points.iter().map(|&x| ratio(x, 1)).collect(),
            ivs.iter().map(|&(a, b)| vec![Interval::new(ratio(a, 1), ratio(b, 1))]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn cells_cut_at_endpoints() {
        let p = pres(&[5, 1, 2, 3, 4, 4], &[(2, 3)]);
        assert_eq!(cells(&p), vec![vec![1], vec![2, 3], vec![4, 5, 0]]);
    }

    #[test]
    fn equal_intervals_have_no_exceptions() {
        let p = pres(&[0, 1, 2, 3, 4, 5], &[(2, 3); 4]);
        let g = p.to_graph();
        let out = distal_partition(&g, &ratio(1, 10)).unwrap();
        assert!(out.exceptional.is_empty());
        assert_eq!((out.parts_v.len(), out.parts_w.len()), (2, 1));
    }

    #[test]
    fn random_intervals_pass() {
        let g = generate(&Family::Interval { n: 300, m: 300, s: 1, seed: 4 }).unwrap();
        let out = distal_partition(&g, &ratio(1, 10)).unwrap();
        let (mu, nu) = (
            WeightedMeasure::uniform(&g, Side::V).unwrap(),
            WeightedMeasure::uniform(&g, Side::W).unwrap(),
        );
        assert!(verify::check_distal(&g, &out, &ratio(1, 10), &mu, &nu).unwrap().pass);
        assert!(out.parts_v.len() + out.parts_w.len() < 600);
    }

    #[test]
    fn needs_presentation() {
        let g = generate(&Family::Half { k: 3 }).unwrap();
        assert!(matches!(distal_partition(&g, &ratio(1, 10)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn pack_respects_cap() {
        let cells = vec![vec![0], vec![1, 2], vec![3, 4, 5, 6], vec![7]];
        assert_eq!(pack(&cells, 3), vec![vec![0, 1, 2], vec![3, 4, 5, 6], vec![7]]);
    }
}
