//! Line-oriented text formats for multivectors, operators, graphs, weight
//! tables and star products. Every writer round-trips through its parser.
//!
//! ```text
//! multivector 2 2
//! 3/2 * x^1,0 * d1^d2
//!
//! operator 2 2
//! 1 * x^0,0 | 1,0 | 0,1
//!
//! 1 2 2
//! 1 q 1
//! 1 q 2
//! ```
//!
//! Indices in `d<i>`, graph sources and targets are 1-based. Blank lines and
//! lines starting with `#` are ignored.

use crate::dpoly::PolyDiffOperator;
use crate::error::{Error, Result};
use crate::graphs::{AdmissibleGraph, Edge, Vertex};
use crate::linfinity::series::FormalSeries;
use crate::poly::Polynomial;
use crate::scalar::{Coefficient, Rational};
use crate::tpoly::MultiVector;
use crate::weights::{Normalization, WeightEstimate};
use std::collections::HashMap;
use std::str::FromStr;

/// Coefficients with a lossless text form.
pub trait TextCoefficient: Coefficient {
    fn to_text(&self) -> String;
    fn from_text(s: &str) -> Option<Self>;
}

impl TextCoefficient for Rational {
    fn to_text(&self) -> String {
        self.to_string()
    }
    fn from_text(s: &str) -> Option<Self> {
        Rational::from_str(s).ok()
    }
}

impl TextCoefficient for f64 {
    fn to_text(&self) -> String {
        format!("{:e}", self)
    }
    fn from_text(s: &str) -> Option<Self> {
        s.parse().ok()
    }
}

fn exponent_list(e: &[u32]) -> String {
    e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-empty, non-comment lines with their 1-based numbers.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.parse().map_err(|_| parse_err(line, format!("expected a non-negative integer, got {:?}", tok)))
}

fn parse_exponents(tok: &str, dim: usize, line: usize) -> Result<Vec<u32>> {
    let e: Vec<u32> = if dim == 0 && tok.is_empty() {
        Vec::new()
    } else {
        tok.split(',')
            .map(|t| t.trim().parse().map_err(|_| parse_err(line, format!("bad exponent {:?}", t))))
            .collect::<Result<_>>()?
    };
    if e.len() != dim {
        return Err(parse_err(line, format!("expected {} exponents, got {}", dim, e.len())));
    }
    Ok(e)
}

fn parse_monomial<R: TextCoefficient>(text: &str, dim: usize, line: usize) -> Result<(R, Vec<u32>)> {
    let (c, x) = text
        .split_once('*')
        .ok_or_else(|| parse_err(line, "expected `coeff * x^e`"))?;
    let c = R::from_text(c.trim()).ok_or_else(|| parse_err(line, format!("bad coefficient {:?}", c.trim())))?;
    let x = x.trim();
    let e = x.strip_prefix("x^").ok_or_else(|| parse_err(line, format!("expected `x^e`, got {:?}", x)))?;
    Ok((c, parse_exponents(e, dim, line)?))
}

fn header<'a>(lines: &[(usize, &'a str)], tag: &str) -> Result<(usize, Vec<&'a str>)> {
    let (ln, first) = *lines.first().ok_or_else(|| parse_err(0, format!("missing `{}` header", tag)))?;
    let toks: Vec<&str> = first.split_whitespace().collect();
    if toks.first() != Some(&tag) {
        return Err(parse_err(ln, format!("expected `{}` header", tag)));
    }
    Ok((ln, toks[1..].to_vec()))
}

pub fn write_multivector(a: &MultiVector) -> String {
    let mut s = format!("multivector {} {}\n", a.dim(), a.order());
    for (idx, f) in a.components() {
        for (e, c) in f.terms() {
            s.push_str(&format!("{} * x^{}", c.to_text(), exponent_list(e)));
            if !idx.is_empty() {
                let d: Vec<String> = idx.iter().map(|i| format!("d{}", i + 1)).collect();
                s.push_str(&format!(" * {}", d.join("^")));
            }
            s.push('\n');
        }
    }
    s
}

pub fn parse_multivector(text: &str) -> Result<MultiVector> {
    let lines = content_lines(text);
    let (ln, h) = header(&lines, "multivector")?;
    if h.len() != 2 {
        return Err(parse_err(ln, "expected `multivector <dim> <order>`"));
    }
    let dim = parse_usize(h[0], ln)?;
    let order = parse_usize(h[1], ln)?;
    let mut out = MultiVector::zero(dim, order);
    for &(ln, l) in &lines[1..] {
        let parts: Vec<&str> = l.splitn(3, '*').collect();
        if parts.len() < 2 {
            return Err(parse_err(ln, "expected `coeff * x^e * d..`"));
        }
        let (c, e): (Rational, _) = parse_monomial(&format!("{}*{}", parts[0], parts[1]), dim, ln)?;
        let idx: Vec<usize> = match parts.get(2) {
            None => Vec::new(),
            Some(d) => d
                .trim()
                .split('^')
                .map(|t| {
                    let i = t.trim().strip_prefix('d').ok_or_else(|| parse_err(ln, format!("bad basis {:?}", t)))?;
                    let i = parse_usize(i, ln)?;
                    if i == 0 || i > dim {
                        return Err(parse_err(ln, format!("index {} out of range 1..={}", i, dim)));
                    }
                    Ok(i - 1)
                })
                .collect::<Result<_>>()?,
        };
        if idx.len() != order {
            return Err(parse_err(ln, format!("expected {} basis factors, got {}", order, idx.len())));
        }
        let term = MultiVector::term(dim, &idx, Polynomial::monomial(e, c)).map_err(|e| parse_err(ln, e.to_string()))?;
        out = out.add(&term);
    }
    Ok(out)
}

pub fn write_operator<R: TextCoefficient>(op: &PolyDiffOperator<R>) -> String {
    let mut s = format!("operator {} {}\n", op.dim(), op.arity());
    for (orders, f) in op.terms() {
        for (e, c) in f.terms() {
            s.push_str(&format!("{} * x^{}", c.to_text(), exponent_list(e)));
            for o in orders {
                s.push_str(&format!(" | {}", exponent_list(o)));
            }
            s.push('\n');
        }
    }
    s
}

fn parse_operator_lines<R: TextCoefficient>(lines: &[(usize, &str)]) -> Result<PolyDiffOperator<R>> {
    let (ln, h) = header(lines, "operator")?;
    if h.len() != 2 {
        return Err(parse_err(ln, "expected `operator <dim> <arity>`"));
    }
    let dim = parse_usize(h[0], ln)?;
    let arity = parse_usize(h[1], ln)?;
    let mut out = PolyDiffOperator::zero(dim, arity);
    for &(ln, l) in &lines[1..] {
        let mut parts = l.split('|');
        let (c, e) = parse_monomial::<R>(parts.next().unwrap_or(""), dim, ln)?;
        let orders: Vec<Vec<u32>> = parts.map(|p| parse_exponents(p.trim(), dim, ln)).collect::<Result<_>>()?;
        if orders.len() != arity {
            return Err(parse_err(ln, format!("expected {} slots, got {}", arity, orders.len())));
        }
        out.add_term(orders, Polynomial::monomial(e, c));
    }
    Ok(out)
}

pub fn parse_operator<R: TextCoefficient>(text: &str) -> Result<PolyDiffOperator<R>> {
    parse_operator_lines(&content_lines(text))
}

pub fn write_graphs(graphs: &[AdmissibleGraph]) -> String {
    graphs.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("\n")
}

pub fn parse_graphs(text: &str) -> Result<Vec<AdmissibleGraph>> {
    let lines = content_lines(text);
    let mut out = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let (ln, h) = lines[i];
        let toks: Vec<&str> = h.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(parse_err(ln, "expected graph header `n m E`"));
        }
        let n = parse_usize(toks[0], ln)?;
        let m = parse_usize(toks[1], ln)?;
        let e = parse_usize(toks[2], ln)?;
        if i + e >= lines.len() {
            return Err(parse_err(ln, format!("graph declares {} edges but the input ends early", e)));
        }
        let mut edges = Vec::with_capacity(e);
        for &(ln, l) in &lines[i + 1..i + 1 + e] {
            edges.push(parse_edge(l, ln)?);
        }
        out.push(AdmissibleGraph::new(n, m, edges).map_err(|err| parse_err(ln, err.to_string()))?);
        i += 1 + e;
    }
    Ok(out)
}

fn parse_edge(l: &str, ln: usize) -> Result<Edge> {
    let toks: Vec<&str> = l.split_whitespace().collect();
    if toks.len() != 3 {
        return Err(parse_err(ln, "expected edge `src p|q idx`"));
    }
    let src = parse_usize(toks[0], ln)?;
    let idx = parse_usize(toks[2], ln)?;
    if src == 0 || idx == 0 {
        return Err(parse_err(ln, "vertex indices are 1-based"));
    }
    let target = match toks[1] {
        "p" => Vertex::Aerial(idx - 1),
        "q" => Vertex::Ground(idx - 1),
        k => return Err(parse_err(ln, format!("unknown vertex kind {:?}", k))),
    };
    Ok(Edge::new(src - 1, target))
}

/// One row of a weight table.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightRecord {
    pub graph: AdmissibleGraph,
    pub estimate: WeightEstimate,
}

const TABLE_HEADER: &str = "# hash n m edges mean stderr samples rejected seed normalization";

fn compact_edges(g: &AdmissibleGraph) -> String {
    if g.edges().is_empty() {
        return "-".into();
    }
    g.edges()
        .iter()
        .map(|e| match e.target {
            Vertex::Ground(t) => format!("{}q{}", e.source + 1, t + 1),
            Vertex::Aerial(t) => format!("{}p{}", e.source + 1, t + 1),
        })
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_compact_edges(tok: &str, ln: usize) -> Result<Vec<Edge>> {
    if tok == "-" {
        return Ok(Vec::new());
    }
    tok.split(',')
        .map(|t| {
            let pos = t.find(['p', 'q']).ok_or_else(|| parse_err(ln, format!("bad edge {:?}", t)))?;
            parse_edge(&format!("{} {} {}", &t[..pos], &t[pos..pos + 1], &t[pos + 1..]), ln)
        })
        .collect()
}

pub fn write_weight_table(records: &[WeightRecord]) -> String {
    let mut s = format!("{}\n", TABLE_HEADER);
    for r in records {
        let g = &r.graph;
        let w = &r.estimate;
        s.push_str(&format!(
            "{:016x} {} {} {} {:e} {:e} {} {} {} {}\n",
            g.hash(),
            g.n(),
            g.m(),
            compact_edges(g),
            w.mean,
            w.stderr,
            w.samples,
            w.rejected,
            w.seed,
            w.normalization.name()
        ));
    }
    s
}

pub fn parse_normalization(s: &str) -> Option<Normalization> {
    match s {
        "ordered" => Some(Normalization::Ordered),
        "grouped" => Some(Normalization::Grouped),
        _ => None,
    }
}

pub fn parse_weight_table(text: &str) -> Result<Vec<WeightRecord>> {
    let mut out = Vec::new();
    for (ln, l) in content_lines(text) {
        let t: Vec<&str> = l.split_whitespace().collect();
        if t.len() != 10 {
            return Err(parse_err(ln, format!("expected 10 fields, got {}", t.len())));
        }
        let hash = u64::from_str_radix(t[0], 16).map_err(|_| parse_err(ln, "bad hash"))?;
        let graph = AdmissibleGraph::new(parse_usize(t[1], ln)?, parse_usize(t[2], ln)?, parse_compact_edges(t[3], ln)?)
            .map_err(|e| parse_err(ln, e.to_string()))?;
        if graph.hash() != hash {
            return Err(parse_err(ln, "hash does not match the edge list"));
        }
        let float = |s: &str| s.parse::<f64>().map_err(|_| parse_err(ln, format!("bad number {:?}", s)));
        let estimate = WeightEstimate {
            mean: float(t[4])?,
            stderr: float(t[5])?,
            samples: parse_usize(t[6], ln)?,
            rejected: parse_usize(t[7], ln)?,
            seed: t[8].parse().map_err(|_| parse_err(ln, "bad seed"))?,
            normalization: parse_normalization(t[9]).ok_or_else(|| parse_err(ln, "bad normalization"))?,
        };
        out.push(WeightRecord { graph, estimate });
    }
    Ok(out)
}

/// Table rows keyed by hash, for [`crate::weights::TableProvider`].
pub fn table_entries(records: &[WeightRecord]) -> HashMap<u64, WeightEstimate> {
    records.iter().map(|r| (r.graph.hash(), r.estimate.clone())).collect()
}

/// `hbar <k>` followed by the operator block of each order.
pub fn write_star<R: TextCoefficient>(series: &FormalSeries<PolyDiffOperator<R>>) -> String {
    let mut s = String::new();
    for (k, op) in series.coefficients().iter().enumerate() {
        s.push_str(&format!("hbar {}\n{}\n", k, write_operator(op)));
    }
    s
}

pub fn parse_star<R: TextCoefficient>(text: &str) -> Result<FormalSeries<PolyDiffOperator<R>>> {
    let lines = content_lines(text);
    let starts: Vec<usize> = (0..lines.len()).filter(|&i| lines[i].1.starts_with("hbar")).collect();
    if starts.is_empty() {
        return Err(parse_err(0, "no `hbar` blocks"));
    }
    let mut coeffs = Vec::new();
    for (b, &s) in starts.iter().enumerate() {
        let (ln, l) = lines[s];
        let k = parse_usize(l.trim_start_matches("hbar").trim(), ln)?;
        if k != b {
            return Err(parse_err(ln, format!("expected hbar {}, got {}", b, k)));
        }
        let end = starts.get(b + 1).copied().unwrap_or(lines.len());
        coeffs.push(parse_operator_lines(&lines[s + 1..end])?);
    }
    Ok(FormalSeries::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn x(i: usize) -> Polynomial {
        Polynomial::variable(3, i)
    }

    #[test]
    fn multivector_roundtrip() {
        let a = MultiVector::term(3, &[2, 0], &(&x(0) * &x(1)) + &Polynomial::constant(3, rat(-3, 2))).unwrap();
        let text = write_multivector(&a);
        assert_eq!(parse_multivector(&text).unwrap(), a);
        let f = MultiVector::function(x(2));
        assert_eq!(parse_multivector(&write_multivector(&f)).unwrap(), f);
    }

    #[test]
    fn operator_roundtrip() {
        let mut op = PolyDiffOperator::<Rational>::zero(3, 2);
        op.add_term(vec![vec![1, 0, 0], vec![0, 2, 1]], x(1).scale_rational(&rat(5, 7)));
        assert_eq!(parse_operator::<Rational>(&write_operator(&op)).unwrap(), op);
        let f = op.map_coefficients(|c| crate::scalar::rat_to_f64(c));
        assert_eq!(parse_operator::<f64>(&write_operator(&f)).unwrap(), f);
    }

    #[test]
    fn graphs_roundtrip() {
        let gs = crate::graphs::enumerate_graphs(2, 1, 2);
        let text = write_graphs(&gs);
        assert_eq!(parse_graphs(&text).unwrap(), gs);
        assert_eq!(write_graphs(&parse_graphs(&text).unwrap()), text);
        let empty = crate::graphs::enumerate_graphs(0, 2, 0);
        assert_eq!(parse_graphs(&write_graphs(&empty)).unwrap(), empty);
    }

    #[test]
    fn table_roundtrip() {
        let g = crate::graphs::enumerate_graphs(1, 1, 1).remove(0);
        let rec = WeightRecord {
            graph: g,
            estimate: WeightEstimate {
                mean: 0.1 + 0.2,
                stderr: 1.0e-3 / 3.0,
                samples: 10,
                rejected: 1,
                seed: 42,
                normalization: Normalization::Grouped,
            },
        };
        let text = write_weight_table(&[rec.clone()]);
        assert_eq!(parse_weight_table(&text).unwrap(), vec![rec]);
    }

    #[test]
    fn parse_errors_carry_line() {
        let e = parse_multivector("multivector 2 1\n1 * x^0,0 * d3\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(parse_graphs("1 2 2\n1 q 1\n").is_err());
        assert!(parse_operator::<Rational>("operator 1 1\n1 * x^0 | 1 | 1\n").is_err());
    }

    #[test]
    fn star_roundtrip() {
        let s = FormalSeries::new(vec![PolyDiffOperator::<Rational>::multiplication(2), PolyDiffOperator::zero(2, 2)]);
        assert_eq!(parse_star::<Rational>(&write_star(&s)).unwrap(), s);
    }
}
