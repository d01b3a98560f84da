use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use tamereg::graph::{format_graph, generate, read_graph, Family, GraphFormat};
use tamereg::measures::{decompose, dominate_generic, dominate_smooth, AtomSummary, Expr, WeightedMeasure};
use tamereg::partition::{
    distal_partition, nip_partition, stable_partition, BiPartition, NipOptions, StableOptions,
};
use tamereg::tameness::{
    ladder_index_with, littlestone_dimension_with, shatter_profile, vc_dimension_with, SearchLimits, TraceSide,
};
use tamereg::{ratio, verify, BipartiteGraph, Rational, Side};

use crate::args::*;

/// The invocation as recorded in every report.
#[derive(Serialize)]
struct RunConfig<'a, A: Serialize> {
    subcommand: &'static str,
    #[serde(flatten)]
    args: &'a A,
}

#[derive(Serialize)]
struct Envelope<'a, A: Serialize, T: Serialize> {
    run: RunConfig<'a, A>,
    graph_sha256: String,
    #[serde(flatten)]
    body: T,
}

pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Decompose(a) => cmd_decompose(a),
        Command::Dominate(a) => cmd_dominate(a),
        Command::Partition(a) => cmd_partition(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn load_graph(path: &Path) -> Result<(BipartiteGraph, String)> {
    let g = read_graph(path).with_context(|| format!("reading graph {}", path.display()))?;
    let canonical = format_graph(&g, GraphFormat::Sparse)?;
    let hash = hex::encode(Sha256::digest(canonical.as_bytes()));
    Ok((g, hash))
}

fn load_measure(path: Option<&PathBuf>, side: Side, len: usize) -> Result<WeightedMeasure> {
    Ok(match path {
        None => WeightedMeasure::uniform_on(side, len)?,
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading weights {}", p.display()))?;
            WeightedMeasure::parse_weights(side, len, &text).with_context(|| format!("weights file {}", p.display()))?
        }
    })
}

fn rational(flag: &str, s: &str) -> Result<Rational> {
    ratio::parse(s).with_context(|| format!("--{flag}: not a rational: {s:?}"))
}

fn need(flag: &str, v: Option<usize>) -> Result<usize> {
    v.with_context(|| format!("--{flag} is required for this family"))
}

fn cmd_generate(a: &GenerateArgs) -> Result<u8> {
    let family = match a.family {
        FamilyName::Half => Family::Half { k: need("k", a.k)? },
        FamilyName::Complete => Family::Complete {
            n: need("n", a.n)?,
            m: need("m", a.m)?,
        },
        FamilyName::Empty => Family::Empty {
            n: need("n", a.n)?,
            m: need("m", a.m)?,
        },
        FamilyName::Random => Family::Random {
            n: need("n", a.n)?,
            m: need("m", a.m)?,
            p: rational("p", a.p.as_deref().unwrap_or("1/2"))?,
            seed: a.seed,
        },
        FamilyName::Interval => Family::Interval {
            n: need("n", a.n)?,
            m: need("m", a.m)?,
            s: a.s.unwrap_or(1),
            seed: a.seed,
        },
        FamilyName::Parity => Family::Parity { d: need("k", a.k)? },
    };
    let g = generate(&family)?;
    let fmt = if g.presentation().is_some() {
        GraphFormat::Interval
    } else {
        GraphFormat::Sparse
    };
    emit(a.out.as_deref(), &format_graph(&g, fmt)?)?;
    eprintln!("generated {}x{} graph with {} edges", g.n(), g.m(), g.edge_count());
    Ok(0)
}

fn cmd_analyze(a: &AnalyzeArgs) -> Result<u8> {
    if a.cap_ladder == 0 {
        bail!("--cap-ladder must be at least 1");
    }
    let (g, hash) = load_graph(&a.graph)?;
    let limits = |cap| SearchLimits {
        cap,
        node_budget: a.node_budget,
    };
    #[derive(Serialize)]
    struct Body {
        n: usize,
        m: usize,
        edges: usize,
        ladder: tamereg::tameness::LadderResult,
        vc: tamereg::tameness::VcResult,
        vc_dual: tamereg::tameness::VcResult,
        littlestone: tamereg::tameness::Dimension,
        #[serde(skip_serializing_if = "Option::is_none")]
        profile: Option<Vec<tamereg::tameness::ProfileEntry>>,
    }
    let body = Body {
        n: g.n(),
        m: g.m(),
        edges: g.edge_count(),
        ladder: ladder_index_with(&g, limits(a.cap_ladder)),
        vc: vc_dimension_with(&g, limits(a.cap_vc), TraceSide::ColumnsOnV),
        vc_dual: vc_dimension_with(&g, limits(a.cap_vc), TraceSide::RowsOnW),
        littlestone: littlestone_dimension_with(&g, limits(a.cap_ld)),
        profile: a.profile.map(|t| shatter_profile(&g, t)).transpose()?,
    };
    eprintln!(
        "ladder {} vc {} littlestone {}",
        body.ladder.dim.value, body.vc.dim.value, body.littlestone.value
    );
    let env = Envelope {
        run: RunConfig {
            subcommand: "analyze",
            args: a,
        },
        graph_sha256: hash,
        body,
    };
    emit(a.out.as_deref(), &to_json(&env)?)?;
    Ok(0)
}

fn cmd_decompose(a: &DecomposeArgs) -> Result<u8> {
    let (g, hash) = load_graph(&a.graph)?;
    let mu = load_measure(a.measure.weights.as_ref(), Side::V, g.n())?;
    let atoms = decompose(&mu, &g, &a.params)?;
    #[derive(Serialize)]
    struct Body {
        params: Vec<usize>,
        atoms: Vec<AtomSummary>,
        #[serde(with = "ratio::serde_str")]
        total: Rational,
    }
    let body = Body {
        params: atoms.first().map(|w| w.atom.params.clone()).unwrap_or_default(),
        total: atoms.iter().map(|w| &w.weight).sum(),
        atoms: atoms.iter().map(AtomSummary::from).collect(),
    };
    eprintln!("{} atoms of positive mass", body.atoms.len());
    let env = Envelope {
        run: RunConfig {
            subcommand: "decompose",
            args: a,
        },
        graph_sha256: hash,
        body,
    };
    emit(a.out.as_deref(), &to_json(&env)?)?;
    Ok(0)
}

fn cmd_dominate(a: &DominateArgs) -> Result<u8> {
    let (g, hash) = load_graph(&a.graph)?;
    let mu = load_measure(a.measure.weights.as_ref(), Side::V, g.n())?;
    let expr = Expr::parse(&a.target).with_context(|| format!("--target: {:?}", a.target))?;
    let target = expr.eval(&g).context("--target")?;
    let desc = expr.to_string();
    let report = match a.mode {
        DominateMode::Smooth => dominate_smooth(&g, &a.params, &mu, &target, &desc)?,
        DominateMode::Generic => dominate_generic(&g, &a.params, &mu, &target, &desc, &rational("delta", &a.delta)?)?,
    };
    eprintln!("exceptional mass {}", ratio::format(&report.exceptional_mass));
    #[derive(Serialize)]
    struct Body {
        report: tamereg::measures::DominationReport,
    }
    let env = Envelope {
        run: RunConfig {
            subcommand: "dominate",
            args: a,
        },
        graph_sha256: hash,
        body: Body { report },
    };
    emit(a.out.as_deref(), &to_json(&env)?)?;
    Ok(0)
}

fn epsilon(s: &str) -> Result<Rational> {
    let eps = rational("epsilon", s)?;
    if !(eps > Rational::from_integer(0.into()) && eps <= Rational::from_integer(1.into())) {
        bail!("--epsilon must lie in (0, 1], got {s}");
    }
    Ok(eps)
}

fn cmd_partition(a: &PartitionArgs) -> Result<u8> {
    let (g, hash) = load_graph(&a.graph)?;
    let eps = epsilon(&a.epsilon)?;
    let mu = load_measure(a.measure.weights.as_ref(), Side::V, g.n())?;
    let p = match a.mode {
        ModeName::Stable => {
            let opts = StableOptions {
                eta: a.eta.as_deref().map(|s| rational("eta", s)).transpose()?,
                max_splits: a.max_splits,
            };
            stable_partition(&g, &eps, &mu, &opts)?
        }
        ModeName::Nip => {
            let nu = load_measure(a.weights_w.as_ref(), Side::W, g.m())?;
            let opts = NipOptions {
                sample_c: a.sample_c,
                max_retries: a.retries,
                max_parts: a.max_parts,
                vc_cap: a.cap_vc,
            };
            nip_partition(&g, &eps, &mu, &nu, a.seed, &opts)?
        }
        ModeName::Distal => {
            if a.measure.weights.is_some() || a.weights_w.is_some() {
                bail!("--weights: the distal engine works with uniform measures only");
            }
            distal_partition(&g, &eps)?
        }
    };
    eprintln!(
        "{} V-parts, {} W-parts, {} exceptional pairs",
        p.parts_v.len(),
        p.parts_w.len(),
        p.exceptional.len()
    );
    if p.provenance.budget_met == Some(false) {
        eprintln!("warning: exceptional mass is not below epsilon within the sampling budget");
    }
    let env = Envelope {
        run: RunConfig {
            subcommand: "partition",
            args: a,
        },
        graph_sha256: hash,
        body: p,
    };
    emit(a.report.as_deref(), &to_json(&env)?)?;
    Ok(0)
}

fn cmd_verify(a: &VerifyArgs) -> Result<u8> {
    let (g, hash) = load_graph(&a.graph)?;
    let text = std::fs::read_to_string(&a.report).with_context(|| format!("reading {}", a.report.display()))?;
    let p = BiPartition::from_json(&text).with_context(|| format!("parsing {}", a.report.display()))?;
    let eps = &p.epsilon;
    if !(eps > &Rational::from_integer(0.into()) && eps <= &Rational::from_integer(1.into())) {
        bail!("epsilon in {} must lie in (0, 1]", a.report.display());
    }
    let mu = load_measure(a.measure.weights.as_ref(), Side::V, g.n())?;
    let nu = load_measure(a.weights_w.as_ref(), Side::W, g.m())?;
    let report = verify::check(&g, &p, p.mode, eps, &mu, &nu)?;
    let pass = report.pass;
    if let Some(w) = report.witness.as_ref().filter(|_| !pass) {
        eprintln!("FAIL ({} mode): {w}", p.mode);
    } else {
        eprintln!(
            "pass ({} mode), exceptional mass {}",
            p.mode,
            ratio::format(&report.exceptional_mass)
        );
    }
    let env = Envelope {
        run: RunConfig {
            subcommand: "verify",
            args: a,
        },
        graph_sha256: hash,
        body: report,
    };
    emit(a.out.as_deref(), &to_json(&env)?)?;
    Ok(if pass { 0 } else { 2 })
}
