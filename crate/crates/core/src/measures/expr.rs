//! Target sets written as Boolean combinations of columns.
//!
//! ```text
//! expr := col(<j>) | not expr | (expr and expr) | (expr or expr) | set{i,i,...}
//! ```
//!
//! Parenthesised chains of one operator (`(e and e and e)`) and redundant
//! parentheses are also accepted.

use std::fmt;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Col(usize),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Set(Vec<usize>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let tokens = lex(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    /// The subset of `V` the expression denotes in `g`.
    pub fn eval(&self, g: &BipartiteGraph) -> Result<BitSet> {
        Ok(match self {
            Expr::Col(j) => {
                if *j >= g.m() {
                    return Err(Error::Input(format!("col({j}) out of range 0..{}", g.m())));
                }
                g.col(*j).clone()
            }
            Expr::Not(e) => e.eval(g)?.complement(),
            Expr::And(es) => {
                let mut acc = BitSet::full(g.n());
                for e in es {
                    acc.and_assign(&e.eval(g)?);
                }
                acc
            }
            Expr::Or(es) => {
                let mut acc = BitSet::new(g.n());
                for e in es {
                    acc.or_assign(&e.eval(g)?);
                }
                acc
            }
            Expr::Set(ix) => {
                if let Some(i) = ix.iter().find(|&&i| i >= g.n()) {
                    return Err(Error::Input(format!("set element {i} out of range 0..{}", g.n())));
                }
                BitSet::from_indices(g.n(), ix.iter().copied())
            }
        })
    }

    /// Columns mentioned by the expression, sorted.
    pub fn columns(&self) -> Vec<usize> {
        fn walk(e: &Expr, out: &mut Vec<usize>) {
            match e {
                Expr::Col(j) => out.push(*j),
                Expr::Not(e) => walk(e, out),
                Expr::And(es) | Expr::Or(es) => es.iter().for_each(|e| walk(e, out)),
                Expr::Set(_) => {}
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, es: &[Expr], op: &str| {
            write!(f, "(")?;
            for (k, e) in es.iter().enumerate() {
                if k > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, ")")
        };
        match self {
            Expr::Col(j) => write!(f, "col({j})"),
            Expr::Not(e) => write!(f, "not {e}"),
            Expr::And(es) => join(f, es, "and"),
            Expr::Or(es) => join(f, es, "or"),
            Expr::Set(ix) => {
                let s: Vec<String> = ix.iter().map(ToString::to_string).collect();
                write!(f, "set{{{}}}", s.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Num(usize),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'{' => Tok::LBrace,
            b'}' => Tok::RBrace,
            b',' => Tok::Comma,
            b'0'..=b'9' => {
                let start = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                let n = src[start..i]
                    .parse()
                    .map_err(|_| Error::Input(format!("number too large at offset {start}")))?;
                out.push((start, Tok::Num(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < b.len() && b[i].is_ascii_alphabetic() {
                    i += 1;
                }
                out.push((start, Tok::Word(src[start..i].to_ascii_lowercase())));
                continue;
            }
            _ => {
                return Err(Error::Input(format!(
                    "unexpected character `{}` at offset {i}",
                    src[i..].chars().next().unwrap()
                )))
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn error(&self, msg: &str) -> Error {
        match self.tokens.get(self.pos) {
            Some((off, _)) => Error::Input(format!("target expression: {msg} at offset {off}")),
            None => Error::Input(format!("target expression: {msg} at end of input")),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.1)
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected {t:?}")))
        }
    }

    fn num(&mut self) -> Result<usize> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.error("expected a number")),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Word(w)) if w == "col" => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let j = self.num()?;
                self.expect(Tok::RParen)?;
                Ok(Expr::Col(j))
            }
            Some(Tok::Word(w)) if w == "not" => {
                self.pos += 1;
                Ok(Expr::Not(Box::new(self.expr()?)))
            }
            Some(Tok::Word(w)) if w == "set" => {
                self.pos += 1;
                self.expect(Tok::LBrace)?;
                let mut ix = Vec::new();
                if self.peek() != Some(&Tok::RBrace) {
                    ix.push(self.num()?);
                    while self.peek() == Some(&Tok::Comma) {
                        self.pos += 1;
                        ix.push(self.num()?);
                    }
                }
                self.expect(Tok::RBrace)?;
                Ok(Expr::Set(ix))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let first = self.expr()?;
                let op = match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        return Ok(first);
                    }
                    Some(Tok::Word(w)) if w == "and" || w == "or" => w.clone(),
                    _ => return Err(self.error("expected `and`, `or` or `)`")),
                };
                let mut items = vec![first];
                while matches!(self.peek(), Some(Tok::Word(w)) if *w == op) {
                    self.pos += 1;
                    items.push(self.expr()?);
                }
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error("mixed `and`/`or` need parentheses; expected `)`"));
                }
                self.pos += 1;
                Ok(if op == "and" {
                    Expr::And(items)
                } else {
                    Expr::Or(items)
                })
            }
            _ => Err(self.error("expected `col`, `not`, `set` or `(`")),
        }
    }
}
