//! Text formats.
//!
//! ```text
//! bipartite <n> <m>          dense <n> <m>          interval <n> <m> <s>
//! e <i> <j>                  0110...                p <rational>      (n lines)
//! ...                        (n lines of m chars)   w <k> <lo> <hi> ... (m lines)
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::ratio::{self, Rational};

use super::{BipartiteGraph, Interval, IntervalPresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Sparse,
    Dense,
    Interval,
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<BipartiteGraph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

/// Writes the interval form when the graph carries a presentation, the sparse
/// edge list otherwise.
pub fn write_graph(g: &BipartiteGraph, path: impl AsRef<Path>) -> Result<()> {
    let fmt = if g.presentation().is_some() {
        GraphFormat::Interval
    } else {
        GraphFormat::Sparse
    };
    std::fs::write(path, format_graph(g, fmt)?)?;
    Ok(())
}

pub fn format_graph(g: &BipartiteGraph, fmt: GraphFormat) -> Result<String> {
    let mut out = String::new();
    match fmt {
        GraphFormat::Sparse => {
            writeln!(out, "bipartite {} {}", g.n(), g.m()).unwrap();
            for (a, b) in g.edges() {
                writeln!(out, "e {a} {b}").unwrap();
            }
        }
        GraphFormat::Dense => {
            writeln!(out, "dense {} {}", g.n(), g.m()).unwrap();
            for r in g.rows() {
                writeln!(out, "{r:?}").unwrap();
            }
        }
        GraphFormat::Interval => {
            let p = g
                .presentation()
                .ok_or_else(|| Error::Unsupported("graph has no interval presentation".into()))?;
            writeln!(out, "interval {} {} {}", p.n(), p.m(), p.s()).unwrap();
            for x in p.points() {
                writeln!(out, "p {}", fmt_num(x)).unwrap();
            }
            for u in p.unions() {
                write!(out, "w {}", u.len()).unwrap();
                for iv in u {
                    write!(out, " {} {}", fmt_num(&iv.lo), fmt_num(&iv.hi)).unwrap();
                }
                out.push('\n');
            }
        }
    }
    Ok(out)
}

fn fmt_num(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        ratio::format(x)
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_count(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    tok.ok_or_else(|| perr(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| perr(line, format!("bad {what}")))
}

fn parse_rat(tok: Option<&str>, line: usize) -> Result<Rational> {
    let t = tok.ok_or_else(|| perr(line, "missing rational"))?;
    ratio::parse(t).map_err(|_| perr(line, format!("bad rational `{t}`")))
}

pub fn parse_graph(text: &str) -> Result<BipartiteGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty graph file"))?;
    let mut toks = header.split_whitespace();
    let kind = toks.next().unwrap_or("");
    let n = parse_count(toks.next(), hl, "n")?;
    let m = parse_count(toks.next(), hl, "m")?;
    match kind {
        "bipartite" => {
            if toks.next().is_some() {
                return Err(perr(hl, "trailing tokens in header"));
            }
            let mut rows = vec![BitSet::new(m); n];
            for (ln, l) in lines {
                let mut t = l.split_whitespace();
                if t.next() != Some("e") {
                    return Err(perr(ln, "expected `e <i> <j>`"));
                }
                let a = parse_count(t.next(), ln, "i")?;
                let b = parse_count(t.next(), ln, "j")?;
                if t.next().is_some() {
                    return Err(perr(ln, "trailing tokens"));
                }
                if a >= n || b >= m {
                    return Err(perr(
                        ln,
                        format!("edge ({a}, {b}) out of range for header {n} x {m}"),
                    ));
                }
                rows[a].insert(b);
            }
            Ok(BipartiteGraph::from_rows_unchecked(m, rows))
        }
        "dense" => {
            let mut rows = Vec::with_capacity(n);
            for (ln, l) in lines {
                if rows.len() == n {
                    return Err(perr(ln, format!("more than {n} rows")));
                }
                if l.len() != m {
                    return Err(perr(ln, format!("row has {} characters, expected {m}", l.len())));
                }
                let mut r = BitSet::new(m);
                for (j, c) in l.bytes().enumerate() {
                    match c {
                        b'1' => r.insert(j),
                        b'0' => {}
                        _ => return Err(perr(ln, "row characters must be 0 or 1")),
                    }
                }
                rows.push(r);
            }
            if rows.len() != n {
                return Err(perr(hl, format!("expected {n} rows, found {}", rows.len())));
            }
            Ok(BipartiteGraph::from_rows_unchecked(m, rows))
        }
        "interval" => {
            let s = parse_count(toks.next(), hl, "s")?;
            let mut points = Vec::with_capacity(n);
            let mut unions = Vec::with_capacity(m);
            let mut last = hl;
            for (ln, l) in lines {
                last = ln;
                let mut t = l.split_whitespace();
                match t.next() {
                    Some("p") if unions.is_empty() && points.len() < n => {
                        points.push(parse_rat(t.next(), ln)?);
                        if t.next().is_some() {
                            return Err(perr(ln, "trailing tokens"));
                        }
                    }
                    Some("w") if points.len() == n && unions.len() < m => {
                        let k = parse_count(t.next(), ln, "interval count")?;
                        if k > s {
                            return Err(perr(ln, format!("{k} intervals exceed s = {s}")));
                        }
                        let mut u = Vec::with_capacity(k);
                        for _ in 0..k {
                            let lo = parse_rat(t.next(), ln)?;
                            let hi = parse_rat(t.next(), ln)?;
                            u.push(Interval::new(lo, hi));
                        }
                        if t.next().is_some() {
                            return Err(perr(ln, "trailing tokens"));
                        }
                        unions.push(u);
                    }
                    _ => return Err(perr(ln, "unexpected line in interval file")),
                }
            }
            if points.len() != n || unions.len() != m {
                return Err(perr(
                    last,
                    format!(
                        "expected {n} points and {m} unions, found {} and {}",
                        points.len(),
                        unions.len()
                    ),
                ));
            }
            let p = IntervalPresentation::new(s, points, unions).map_err(|e| perr(hl, e.to_string()))?;
            Ok(p.to_graph())
        }
        other => Err(perr(hl, format!("unknown graph kind `{other}`"))),
    }
}
