//! End-to-end acceptance run. Each criterion prints one PASS/FAIL line; the
//! process exits non-zero if any fails.

use std::collections::HashMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use num_traits::Zero;
use tamereg::graph::{generate, Family, Interval, IntervalPresentation};
use tamereg::measures::{decompose, dominate_generic, dominate_smooth, AtomVerdict, Expr, WeightedMeasure};
use tamereg::partition::{distal_partition, nip_partition, stable_partition, BiPartition, Mode, NipOptions, StableOptions};
use tamereg::ratio::ratio;
use tamereg::tameness::{ladder_index, littlestone_dimension, vc_dimension, TraceSide};
use tamereg::verify::{brute_force_optimal, check_distal, check_nip, check_stable};
use tamereg::{BipartiteGraph, BitSet, Rational, Side};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(id: usize, name: &str, limit: Duration, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let res = f();
    let took = start.elapsed();
    let res = res.and_then(|d| {
        if took <= limit {
            Ok(d)
        } else {
            Err(format!("{d}; took {took:.1?}, limit {limit:?}"))
        }
    });
    match &res {
        Ok(d) => println!("PASS {id} {name}: {d} [{took:.1?}]"),
        Err(e) => println!("FAIL {id} {name}: {e} [{took:.1?}]"),
    }
    res.is_ok()
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, m: usize) -> BipartiteGraph {
    let p = rng.gen_range(1..=7);
    generate(&Family::Random {
        n,
        m,
        p: ratio(p, 8),
        seed: rng.gen(),
    })
    .unwrap()
}

fn uniform(g: &BipartiteGraph) -> (WeightedMeasure, WeightedMeasure) {
    (
        WeightedMeasure::uniform(g, Side::V).unwrap(),
        WeightedMeasure::uniform(g, Side::W).unwrap(),
    )
}

/// Random weights in `0..=4` (not all zero), or `1..=4` when `positive`.
fn random_measure(rng: &mut ChaCha8Rng, side: Side, len: usize, positive: bool) -> WeightedMeasure {
    let lo = if positive { 1 } else { 0 };
    let mut w: Vec<i64> = (0..len).map(|_| rng.gen_range(lo..=4)).collect();
    if w.iter().all(|&x| x == 0) {
        w[0] = 1;
    }
    let total: i64 = w.iter().sum();
    WeightedMeasure::from_weights(side, w.into_iter().map(|x| ratio(x, total)).collect()).unwrap()
}

// ---------------------------------------------------------------- oracles

fn naive_ladder(g: &BipartiteGraph) -> usize {
    fn grow(g: &BipartiteGraph, a: &mut Vec<usize>, b: &mut Vec<usize>, best: &mut usize) {
        *best = (*best).max(a.len());
        for x in 0..g.n() {
            for y in 0..g.m() {
                let ok = g.has_edge(x, y)
                    && b.iter().all(|&bj| !g.has_edge(x, bj))
                    && a.iter().all(|&ai| g.has_edge(ai, y));
                if ok {
                    a.push(x);
                    b.push(y);
                    grow(g, a, b, best);
                    a.pop();
                    b.pop();
                }
            }
        }
    }
    let mut best = 0;
    grow(g, &mut Vec::new(), &mut Vec::new(), &mut best);
    best
}

/// Largest subset of `V` whose traces under the columns are all subsets.
fn naive_vc(g: &BipartiteGraph) -> usize {
    let col_mask = |b: usize| (0..g.n()).filter(|&a| g.has_edge(a, b)).fold(0u32, |m, a| m | 1 << a);
    let cols: Vec<u32> = (0..g.m()).map(col_mask).collect();
    let mut best = 0;
    for s in 0u32..1 << g.n() {
        let k = s.count_ones() as usize;
        if k <= best {
            continue;
        }
        let mut traces: Vec<u32> = cols.iter().map(|c| c & s).collect();
        traces.sort_unstable();
        traces.dedup();
        if traces.len() == 1 << k {
            best = k;
        }
    }
    best
}

/// Littlestone dimension of the rows as a class of functions on `W`.
fn naive_ld(g: &BipartiteGraph) -> usize {
    fn ld(g: &BipartiteGraph, h: u32, memo: &mut HashMap<u32, usize>) -> usize {
        if h.count_ones() <= 1 {
            return 0;
        }
        if let Some(&v) = memo.get(&h) {
            return v;
        }
        let mut best = 0;
        for b in 0..g.m() {
            let ones = (0..g.n()).filter(|&a| h >> a & 1 == 1 && g.has_edge(a, b)).fold(0u32, |m, a| m | 1 << a);
            let zeros = h & !ones;
            if ones != 0 && zeros != 0 {
                best = best.max(1 + ld(g, ones, memo).min(ld(g, zeros, memo)));
            }
        }
        memo.insert(h, best);
        best
    }
    if g.n() == 0 {
        return 0;
    }
    ld(g, (1u32 << g.n()) - 1, &mut HashMap::new())
}

fn transpose_vc(g: &BipartiteGraph) -> usize {
    naive_vc(&g.transpose())
}

// ---------------------------------------------------------------- criteria

fn tameness_oracles() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for t in 0..200 {
        let (n, m) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let g = random_graph(&mut rng, n, m);
        let lad = ladder_index(&g, 16);
        let vc = vc_dimension(&g, 12, TraceSide::ColumnsOnV);
        let vcd = vc_dimension(&g, 12, TraceSide::RowsOnW);
        let ld = littlestone_dimension(&g, 10);
        ensure(lad.dim.is_exact() && vc.dim.is_exact() && vcd.dim.is_exact() && ld.is_exact(), || {
            format!("graph {t}: a search was not exact")
        })?;
        let expect = (naive_ladder(&g), naive_vc(&g), transpose_vc(&g), naive_ld(&g));
        let got = (lad.dim.value, vc.dim.value, vcd.dim.value, ld.value);
        ensure(got == expect, || format!("graph {t} ({n}x{m}): got {got:?}, oracle {expect:?}"))?;
        ensure(lad.witness.as_ref().is_none_or(|w| w.check(&g)), || format!("graph {t}: bad ladder witness"))?;
        ensure(vc.witness.as_ref().is_none_or(|w| w.check(&g, TraceSide::ColumnsOnV)), || {
            format!("graph {t}: bad shatter witness")
        })?;
    }
    for k in 1..=10 {
        let g = generate(&Family::Half { k }).unwrap();
        let l = ladder_index(&g, 16).dim.value;
        ensure(l == k, || format!("ladder(H_{k}) = {l}"))?;
        if k >= 2 {
            let v = vc_dimension(&g, 12, TraceSide::ColumnsOnV).dim.value;
            ensure(v == 1, || format!("vc(H_{k}) = {v}"))?;
        }
    }
    for d in 1..=3 {
        let g = generate(&Family::Parity { d }).unwrap();
        let v = vc_dimension(&g, 12, TraceSide::ColumnsOnV).dim.value;
        ensure(v == d, || format!("vc(parity({d})) = {v}"))?;
    }
    Ok("200 random graphs match the naive oracles; H_k and parity fixed points hold".into())
}

fn random_expr(rng: &mut ChaCha8Rng, params: &[usize], depth: usize) -> Expr {
    if params.is_empty() {
        let e = Expr::Set(Vec::new());
        return if rng.gen() { e } else { Expr::Not(Box::new(e)) };
    }
    if depth == 0 || rng.gen_range(0..3) == 0 {
        return Expr::Col(params[rng.gen_range(0..params.len())]);
    }
    match rng.gen_range(0..3) {
        0 => Expr::Not(Box::new(random_expr(rng, params, depth - 1))),
        1 => Expr::And(vec![random_expr(rng, params, depth - 1), random_expr(rng, params, depth - 1)]),
        _ => Expr::Or(vec![random_expr(rng, params, depth - 1), random_expr(rng, params, depth - 1)]),
    }
}

fn finite_decomposition() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut sets = 0;
    for t in 0..100 {
        let (n, m) = (rng.gen_range(1..=64), rng.gen_range(1..=64));
        let g = random_graph(&mut rng, n, m);
        let k = rng.gen_range(0..=m.min(10));
        let params: Vec<usize> = rand::seq::index::sample(&mut rng, m, k).into_vec();
        let mu = random_measure(&mut rng, Side::V, n, false);
        let atoms = decompose(&mu, &g, &params).unwrap();
        let total: Rational = atoms.iter().map(|a| &a.weight).sum();
        ensure(total == ratio(1, 1), || format!("triple {t}: weights sum to {total}"))?;
        ensure(atoms.iter().all(|a| a.weight > Rational::zero()), || format!("triple {t}: nonpositive weight"))?;
        for _ in 0..1000 {
            let e = random_expr(&mut rng, &params, 3);
            let s = e.eval(&g).unwrap();
            let mut sum = Rational::zero();
            for a in &atoms {
                if a.atom.members.is_subset(&s) {
                    sum += &a.weight;
                } else {
                    ensure(!a.atom.members.intersects(&s), || format!("triple {t}: {e} splits an atom"))?;
                }
            }
            ensure(mu.mass(&s) == sum, || format!("triple {t}: mass of {e} is not the atom sum"))?;
            sets += 1;
        }
    }
    Ok(format!("100 triples, {sets} sets, exact"))
}

fn domination() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut compared = 0;
    for t in 0..50 {
        let (n, m) = (rng.gen_range(1..=24), rng.gen_range(1..=24));
        let g = random_graph(&mut rng, n, m);
        let all: Vec<usize> = (0..m).collect();
        let mu = random_measure(&mut rng, Side::V, n, true);
        let mut targets: Vec<Expr> = (0..m).map(Expr::Col).collect();
        targets.extend((0..10).map(|_| random_expr(&mut rng, &all, 3)));
        for e in &targets {
            let y = e.eval(&g).unwrap();
            let r = dominate_smooth(&g, &all, &mu, &y, &e.to_string()).unwrap();
            ensure(r.exceptional_mass.is_zero(), || format!("graph {t}: {e} has exceptional mass"))?;
        }
        for _ in 0..10 {
            let k = rng.gen_range(0..=m);
            let params = rand::seq::index::sample(&mut rng, m, k).into_vec();
            let y = BitSet::from_indices(n, (0..n).filter(|_| rng.gen()));
            let s = dominate_smooth(&g, &params, &mu, &y, "y").unwrap();
            let d = dominate_generic(&g, &params, &mu, &y, "y", &Rational::zero()).unwrap();
            ensure(s.atoms.len() == d.atoms.len(), || format!("graph {t}: atom lists differ"))?;
            for (a, b) in s.atoms.iter().zip(&d.atoms) {
                ensure(a.members == b.members && a.violating == b.violating, || {
                    format!("graph {t}: verdicts differ on atom {:?}", a.members)
                })?;
            }
            ensure(s.exceptional_mass == d.exceptional_mass, || format!("graph {t}: masses differ"))?;
            compared += s.atoms.len();
        }
    }
    let g = generate(&Family::Half { k: 4 }).unwrap();
    let mu = WeightedMeasure::uniform(&g, Side::V).unwrap();
    let y = g.col(2).clone();
    let r0 = dominate_generic(&g, &[1], &mu, &y, "col(2)", &Rational::zero()).unwrap();
    let r1 = dominate_generic(&g, &[1], &mu, &y, "col(2)", &ratio(1, 4)).unwrap();
    ensure(r0.exceptional_mass == ratio(1, 2) && r1.exceptional_mass.is_zero(), || {
        format!("H_4 example gave {} and {}", r0.exceptional_mass, r1.exceptional_mass)
    })?;
    ensure(r1.atoms.iter().any(|a| a.verdict == AtomVerdict::SplitNarrow), || "H_4: no narrow split".into())?;
    Ok(format!("50 graphs; {compared} atom verdicts agree; H_4 gives 1/2 and 0"))
}

fn stable_ok(g: &BipartiteGraph, eps: &Rational) -> Result<BiPartition, String> {
    let mu = WeightedMeasure::uniform(g, Side::V).unwrap();
    let p = stable_partition(g, eps, &mu, &StableOptions::default()).map_err(|e| e.to_string())?;
    ensure(p.exceptional.is_empty(), || "exceptional pairs in a stable partition".into())?;
    let r = check_stable(g, &p, eps, &mu).unwrap();
    ensure(r.pass, || format!("check_stable failed: {:?}", r.witness))?;
    Ok(p)
}

fn stable_regularity() -> Check {
    let epss = [ratio(1, 10), ratio(1, 20)];
    for eps in &epss {
        for k in 1..=32 {
            let g = generate(&Family::Half { k }).unwrap();
            let p = stable_ok(&g, eps).map_err(|e| format!("H_{k}: {e}"))?;
            ensure(p.parts_v.len() <= k && p.parts_w.len() <= k, || {
                format!("H_{k}: {}+{} parts", p.parts_v.len(), p.parts_w.len())
            })?;
        }
    }
    // mean total parts per vertex over five seeds
    let mut ratios = Vec::new();
    for &n in &[100usize, 400, 1600, 2000] {
        let mut parts = 0;
        for eps in &epss {
            for seed in 0..5 {
                let g = generate(&Family::Interval { n, m: n, s: 1, seed }).unwrap();
                let p = stable_ok(&g, eps).map_err(|e| format!("interval n={n} seed {seed}: {e}"))?;
                parts += p.parts_v.len() + p.parts_w.len();
            }
        }
        ratios.push((n, parts as f64 / (10 * n) as f64));
    }
    let shown: Vec<String> = ratios.iter().map(|(n, r)| format!("{n}:{r:.4}")).collect();
    let shown = shown.join(" ");
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut corpus: Vec<BipartiteGraph> = (0..100)
        .map(|_| {
            let (n, m) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
            random_graph(&mut rng, n, m)
        })
        .collect();
    corpus.extend((1..=8).map(|k| generate(&Family::Half { k }).unwrap()));
    corpus.extend((1..=3).map(|d| generate(&Family::Parity { d }).unwrap()));
    corpus.push(BipartiteGraph::complete(5, 7));
    corpus.push(BipartiteGraph::empty(8, 3));
    let mut worst: f64 = 0.0;
    for (t, g) in corpus.iter().enumerate() {
        for eps in &epss {
            let p = stable_ok(g, eps).map_err(|e| format!("small graph {t}: {e}"))?;
            let opt = brute_force_optimal(g, eps, Mode::Stable, g.n().max(g.m()))
                .unwrap()
                .counts
                .expect("singletons always work");
            let (ours, best) = (p.parts_v.len() + p.parts_w.len(), opt.0 + opt.1);
            ensure(ours <= 2 * best, || format!("small graph {t}: {ours} parts, optimum {best}"))?;
            worst = worst.max(ours as f64 / best as f64);
        }
    }
    let ratio_ok = ratios[1].1 <= ratios[0].1 && ratios[2].1 <= ratios[1].1;
    ensure(ratio_ok, || format!("parts/n over n=100,400,1600 is not non-increasing ({shown})"))?;
    Ok(format!(
        "H_k and intervals pass with no exceptions; parts/n {shown}; worst ratio to optimum {worst:.2}"
    ))
}

fn nip_regularity() -> Check {
    let eps = ratio(1, 10);
    let mut masses = Vec::new();
    for seed in 0..3 {
        let g = generate(&Family::Interval { n: 500, m: 500, s: 2, seed }).unwrap();
        let (mu, nu) = uniform(&g);
        let p = nip_partition(&g, &eps, &mu, &nu, seed, &NipOptions::default()).map_err(|e| e.to_string())?;
        let r = check_nip(&g, &p, &eps, &mu, &nu).unwrap();
        ensure(r.pass && r.exceptional_mass < eps, || {
            format!("seed {seed}: check_nip failed, mass {}", r.exceptional_mass)
        })?;
        masses.push(r.exceptional_mass.to_string());
    }
    let g = generate(&Family::Parity { d: 4 }).unwrap();
    let brute = brute_force_optimal(&g, &eps, Mode::Nip, 3).unwrap();
    ensure(brute.counts.is_none(), || format!("brute force found {:?}", brute.counts))?;
    let (mu, nu) = uniform(&g);
    let opts = NipOptions {
        max_parts: Some(3),
        ..NipOptions::default()
    };
    let p = nip_partition(&g, &eps, &mu, &nu, 0, &opts).map_err(|e| e.to_string())?;
    ensure(p.provenance.budget_met == Some(false), || "parity(4) claimed to meet the budget".into())?;
    Ok(format!(
        "2-interval masses [{}]; parity(4) has no 3-part witness ({} partitions) and budget_met=false",
        masses.join(", "),
        brute.examined
    ))
}

fn bit_homogeneous_outside(g: &BipartiteGraph, p: &BiPartition) -> Result<Rational, String> {
    let (vs, ws) = (p.sets_v(g.n()), p.sets_w(g.m()));
    let mut exc_cells = 0;
    for (i, v) in vs.iter().enumerate() {
        for (j, w) in ws.iter().enumerate() {
            if p.exceptional.binary_search(&(i, j)).is_ok() {
                exc_cells += v.count() * w.count();
                continue;
            }
            let e = g.edges_between(v, w);
            ensure(e == 0 || e == v.count() * w.count(), || format!("pair ({i}, {j}) is mixed"))?;
        }
    }
    Ok(tamereg::ratio::from_counts(exc_cells, g.n() * g.m()))
}

fn distal_homogeneity() -> Check {
    let eps = ratio(1, 10);
    let mut shown = Vec::new();
    for &(n, seed) in &[(100usize, 0u64), (300, 1), (1000, 2), (1000, 3)] {
        let g = generate(&Family::Interval { n, m: n, s: 1, seed }).unwrap();
        let p = distal_partition(&g, &eps).map_err(|e| e.to_string())?;
        let (mu, nu) = uniform(&g);
        let r = check_distal(&g, &p, &eps, &mu, &nu).unwrap();
        let mass = bit_homogeneous_outside(&g, &p).map_err(|e| format!("n={n}: {e}"))?;
        ensure(r.pass && mass < eps && mass == r.exceptional_mass, || {
            format!("n={n}: pass={} mass {mass}", r.pass)
        })?;
        shown.push(format!("n={n}:{}x{}", p.parts_v.len(), p.parts_w.len()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let points: Vec<Rational> = (0..200).map(|_| ratio(rng.gen_range(0..1000), 1)).collect();
    let iv = Interval::new(ratio(250, 1), ratio(700, 1));
    let pres = IntervalPresentation::new(1, points, vec![vec![iv]; 150]).unwrap();
    let g = pres.to_graph();
    let p = distal_partition(&g, &eps).map_err(|e| e.to_string())?;
    ensure(p.exceptional.is_empty(), || format!("equal intervals: {} exceptional pairs", p.exceptional.len()))?;
    Ok(format!("{}; equal intervals give no exceptions", shown.join(" ")))
}

fn mode_chain() -> Check {
    let mut corpus: Vec<(String, BipartiteGraph)> = Vec::new();
    for k in [2, 5, 8, 12, 20] {
        corpus.push((format!("H_{k}"), generate(&Family::Half { k }).unwrap()));
    }
    for d in 1..=4 {
        corpus.push((format!("parity({d})"), generate(&Family::Parity { d }).unwrap()));
    }
    for seed in 0..4 {
        corpus.push((
            format!("interval s=1 seed {seed}"),
            generate(&Family::Interval { n: 60, m: 60, s: 1, seed }).unwrap(),
        ));
        corpus.push((
            format!("interval s=2 seed {seed}"),
            generate(&Family::Interval { n: 60, m: 60, s: 2, seed }).unwrap(),
        ));
        for p in [1, 4, 7] {
            corpus.push((
                format!("random p={p}/8 seed {seed}"),
                generate(&Family::Random { n: 30, m: 30, p: ratio(p, 8), seed }).unwrap(),
            ));
        }
    }
    corpus.push(("complete".into(), BipartiteGraph::complete(6, 9)));
    corpus.push(("empty".into(), BipartiteGraph::empty(7, 4)));
    let (mut passing, mut bit) = (0, 0);
    for (name, g) in &corpus {
        let (mu, nu) = uniform(g);
        for eps in [ratio(1, 4), ratio(1, 10), ratio(1, 20)] {
            let Ok(p) = stable_partition(g, &eps, &mu, &StableOptions::default()) else {
                continue;
            };
            if !check_stable(g, &p, &eps, &mu).unwrap().pass {
                continue;
            }
            passing += 1;
            ensure(check_nip(g, &p, &eps, &mu, &nu).unwrap().pass, || {
                format!("{name} at {eps}: stable passes but nip fails")
            })?;
            if bit_homogeneous_outside(g, &p).is_ok() {
                bit += 1;
                ensure(check_distal(g, &p, &eps, &mu, &nu).unwrap().pass, || {
                    format!("{name} at {eps}: bit-homogeneous but distal fails")
                })?;
            }
        }
    }
    Ok(format!("{passing} passing stable outputs imply nip; {bit} bit-homogeneous ones imply distal"))
}

fn cli(dir: &Path, threads: usize, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_tamereg"))
        .current_dir(dir)
        .arg("--threads")
        .arg(threads.to_string())
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(out.stdout)
}

fn has_float(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Number(x) => x.is_f64(),
        serde_json::Value::Array(a) => a.iter().any(has_float),
        serde_json::Value::Object(o) => o.values().any(has_float),
        _ => false,
    }
}

fn reproducibility() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let setup: &[&[&str]] = &[
        &["generate", "--family", "half", "--k", "12", "--out", "h.bg"],
        &["generate", "--family", "interval", "--n", "300", "--m", "300", "--s", "2", "--seed", "5", "--out", "i2.bg"],
        &["generate", "--family", "interval", "--n", "300", "--m", "300", "--s", "1", "--seed", "6", "--out", "i1.bg"],
        &["generate", "--family", "random", "--n", "40", "--m", "40", "--p", "1/3", "--seed", "7", "--out", "r.bg"],
        &["partition", "i2.bg", "--mode", "nip", "--epsilon", "1/10", "--seed", "3", "--report", "n.json"],
    ];
    for a in setup {
        cli(d, 1, a)?;
    }
    let runs: &[&[&str]] = &[
        &["generate", "--family", "random", "--n", "30", "--m", "20", "--seed", "11"],
        &["generate", "--family", "interval", "--n", "50", "--m", "40", "--s", "2", "--seed", "12"],
        &["generate", "--family", "parity", "--k", "3"],
        &["analyze", "h.bg"],
        &["analyze", "r.bg", "--profile", "3"],
        &["analyze", "i2.bg"],
        &["decompose", "r.bg", "--params", "0,3,5"],
        &["dominate", "r.bg", "--params", "0,1", "--target", "(col(0) and not col(2))", "--mode", "generic", "--delta", "1/8"],
        &["partition", "h.bg", "--mode", "stable", "--epsilon", "1/4"],
        &["partition", "i1.bg", "--mode", "stable", "--epsilon", "1/10"],
        &["partition", "i2.bg", "--mode", "nip", "--epsilon", "1/10", "--seed", "3"],
        &["partition", "r.bg", "--mode", "nip", "--epsilon", "1/5", "--seed", "9", "--max-parts", "4"],
        &["partition", "i1.bg", "--mode", "distal", "--epsilon", "1/10"],
        &["verify", "n.json", "i2.bg"],
    ];
    let mut baseline: Option<Vec<Vec<u8>>> = None;
    for threads in [1, 4] {
        for _ in 0..2 {
            let outs = runs.iter().map(|a| cli(d, threads, a)).collect::<Result<Vec<_>, _>>()?;
            if let Some(b) = &baseline {
                for (k, (x, y)) in b.iter().zip(&outs).enumerate() {
                    ensure(x == y, || format!("{:?} differs with {threads} threads", runs[k]))?;
                }
            } else {
                baseline = Some(outs);
            }
        }
    }
    let floats = baseline
        .unwrap()
        .iter()
        .filter_map(|o| serde_json::from_slice::<serde_json::Value>(o).ok())
        .filter(has_float)
        .count();
    ensure(floats == 0, || format!("{floats} reports contain decimal numbers"))?;
    Ok(format!("{} commands byte-identical over 2 runs x threads {{1, 4}}", runs.len()))
}

fn main() {
    let results = [
        run(1, "tameness oracle equivalence", Duration::from_secs(60), tameness_oracles),
        run(2, "finite decomposition", Duration::from_secs(30), finite_decomposition),
        run(3, "domination", Duration::from_secs(60), domination),
        run(4, "stable regularity", Duration::from_secs(300), stable_regularity),
        run(5, "nip regularity", Duration::from_secs(180), nip_regularity),
        run(6, "distal homogeneity", Duration::from_secs(60), distal_homogeneity),
        run(7, "mode-strength chain", Duration::from_secs(300), mode_chain),
        run(8, "reproducibility", Duration::from_secs(300), reproducibility),
    ];
    let failed = results.iter().filter(|r| !**r).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
