//! Admissible graphs, their polydifferential operators, and the boundary
//! faces of the configuration spaces `C+_{n,m}`.
//!
//! Aerial vertices `p_0..p_{n-1}` carry polyvector fields, ground vertices
//! `q_0..q_{m-1}` carry functions. Every edge leaves an aerial vertex. The
//! order of the edge list matters: each edge contributes an odd 1-form.

use crate::dpoly::PolyDiffOperator;
use crate::error::{Error, Result};
use crate::graded::{reorder_sign, Sign};
use crate::poly::Polynomial;
use crate::scalar::Rational;
use crate::tpoly::MultiVector;
use sha2::{Digest, Sha256};
use std::fmt;

/// Edge target. Ground vertices sort before aerial ones.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Vertex {
    Ground(usize),
    Aerial(usize),
}

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge {
    pub source: usize,
    pub target: Vertex,
}

impl Edge {
    pub fn new(source: usize, target: Vertex) -> Self {
        Edge { source, target }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AdmissibleGraph {
    n: usize,
    m: usize,
    edges: Vec<Edge>,
}

impl AdmissibleGraph {
    /// Validates the edge list (sources aerial, no loops, no repeated edges)
    /// and keeps its order.
    pub fn new(n: usize, m: usize, edges: Vec<Edge>) -> Result<Self> {
        for (k, e) in edges.iter().enumerate() {
            if e.source >= n {
                return Err(Error::NotAdmissible(format!("edge {} leaves a vertex outside p0..p{}", k, n)));
            }
            match e.target {
                Vertex::Aerial(t) if t >= n => {
                    return Err(Error::NotAdmissible(format!("edge {} targets missing aerial vertex", k)))
                }
                Vertex::Ground(t) if t >= m => {
                    return Err(Error::NotAdmissible(format!("edge {} targets missing ground vertex", k)))
                }
                Vertex::Aerial(t) if t == e.source => {
                    return Err(Error::NotAdmissible(format!("edge {} is a loop", k)))
                }
                _ => {}
            }
            if edges[..k].contains(e) {
                return Err(Error::NotAdmissible(format!("edge {} is repeated", k)));
            }
        }
        Ok(AdmissibleGraph { n, m, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut k = vec![0; self.n];
        for e in &self.edges {
            k[e.source] += 1;
        }
        k
    }

    /// `dim C+_{n,m} = 2n + m - 2`.
    pub fn dimension(&self) -> i64 {
        2 * self.n as i64 + self.m as i64 - 2
    }

    pub fn is_canonical(&self) -> bool {
        self.edges.windows(2).all(|w| w[0] < w[1])
    }

    /// Edges grouped by source, each group sorted by target, together with
    /// the sign `ε(σ)` relating the two wedge products of edge forms:
    /// `ω_self = sign · ω_canonical`.
    pub fn canonical(&self) -> (AdmissibleGraph, Sign) {
        let mut idx: Vec<usize> = (0..self.edges.len()).collect();
        idx.sort_by_key(|&i| self.edges[i]);
        let sign = reorder_sign(&idx, &vec![true; idx.len()]);
        let edges = idx.iter().map(|&i| self.edges[i]).collect();
        (AdmissibleGraph { n: self.n, m: self.m, edges }, sign)
    }

    /// Edges listed in the order given by `perm` (`perm[k]` is the old index
    /// of the new `k`-th edge).
    pub fn reorder(&self, perm: &[usize]) -> Result<(AdmissibleGraph, Sign)> {
        let s = crate::graded::quillen_sign(perm, &crate::graded::DegreeVector(vec![1; self.edges.len()]))?;
        let edges = perm.iter().map(|&i| self.edges[i]).collect();
        Ok((AdmissibleGraph { n: self.n, m: self.m, edges }, s))
    }

    /// Canonical one-line key: `n m E` followed by `src kind idx` triples,
    /// 1-based, in canonical edge order.
    pub fn key(&self) -> String {
        let (c, _) = self.canonical();
        let mut s = format!("{} {} {}", c.n, c.m, c.edges.len());
        for e in &c.edges {
            s.push_str(&format!(";{}", edge_text(e)));
        }
        s
    }

    /// Stable 64-bit identifier of the canonical graph.
    pub fn hash(&self) -> u64 {
        let digest = Sha256::digest(self.key().as_bytes());
        u64::from_be_bytes(digest[..8].try_into().expect("digest length"))
    }
}

pub fn edge_text(e: &Edge) -> String {
    match e.target {
        Vertex::Ground(t) => format!("{} q {}", e.source + 1, t + 1),
        Vertex::Aerial(t) => format!("{} p {}", e.source + 1, t + 1),
    }
}

impl fmt::Display for AdmissibleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.n, self.m, self.edges.len())?;
        for e in &self.edges {
            writeln!(f, "{}", edge_text(e))?;
        }
        Ok(())
    }
}

fn targets_of(j: usize, n: usize, m: usize) -> Vec<Vertex> {
    (0..m).map(Vertex::Ground).chain((0..n).filter(|&t| t != j).map(Vertex::Aerial)).collect()
}

fn combinations<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// Admissible graphs with prescribed out-degrees, canonical edge order, in
/// lexicographic order of their edge lists.
pub fn enumerate_with_out_degrees(n: usize, m: usize, out_degrees: &[usize]) -> Vec<AdmissibleGraph> {
    assert_eq!(out_degrees.len(), n);
    let mut acc: Vec<Vec<Edge>> = vec![Vec::new()];
    for j in 0..n {
        let choices = combinations(&targets_of(j, n, m), out_degrees[j]);
        let mut next = Vec::new();
        for partial in &acc {
            for c in &choices {
                let mut e = partial.clone();
                e.extend(c.iter().map(|&t| Edge::new(j, t)));
                next.push(e);
            }
        }
        acc = next;
    }
    acc.into_iter().map(|edges| AdmissibleGraph { n, m, edges }).collect()
}

fn degree_vectors(n: usize, total: usize, cap: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for k in 0..=total.min(cap) {
        for mut rest in degree_vectors(n - 1, total - k, cap) {
            rest.insert(0, k);
            out.push(rest);
        }
    }
    out
}

/// All admissible graphs with `n` aerial, `m` ground vertices and `edges`
/// edges, in canonical form and deterministic order.
pub fn enumerate_graphs(n: usize, m: usize, edges: usize) -> Vec<AdmissibleGraph> {
    let cap = (n + m).saturating_sub(1);
    let mut out: Vec<AdmissibleGraph> = degree_vectors(n, edges, cap)
        .iter()
        .flat_map(|k| enumerate_with_out_degrees(n, m, k))
        .collect();
    out.sort_by(|a, b| a.edges.cmp(&b.edges));
    out
}

/// The operator `B_Γ(α_1, .., α_n)`, with `Γ` read in canonical edge order.
/// Vanishes unless each `α_j` has order equal to the out-degree of `p_j`.
pub fn graph_operator(graph: &AdmissibleGraph, alphas: &[MultiVector]) -> Result<PolyDiffOperator<Rational>> {
    if alphas.len() != graph.n {
        return Err(Error::ArityMismatch { expected: graph.n, got: alphas.len() });
    }
    let dim = match alphas.first() {
        Some(a) => a.dim(),
        None => return Err(Error::InvalidInput("graph operator needs at least one aerial vertex".into())),
    };
    if let Some(a) = alphas.iter().find(|a| a.dim() != dim) {
        return Err(Error::DimensionMismatch(dim, a.dim()));
    }
    let (g, sign) = graph.canonical();
    let mut out = PolyDiffOperator::zero(dim, g.m);
    let ks = g.out_degrees();
    if alphas.iter().zip(&ks).any(|(a, &k)| a.order() != k || a.is_zero()) {
        return Ok(out);
    }
    let per_vertex: Vec<Vec<(Vec<usize>, Polynomial)>> = alphas.iter().map(|a| a.full_components()).collect();
    let edges_of: Vec<Vec<Edge>> = (0..g.n).map(|j| g.edges.iter().filter(|e| e.source == j).copied().collect()).collect();

    let mut choice = vec![0usize; g.n];
    loop {
        let mut aerial_orders = vec![vec![0u32; dim]; g.n];
        let mut ground_orders = vec![vec![0u32; dim]; g.m];
        for j in 0..g.n {
            let (tuple, _) = &per_vertex[j][choice[j]];
            for (e, &i) in edges_of[j].iter().zip(tuple) {
                match e.target {
                    Vertex::Aerial(t) => aerial_orders[t][i] += 1,
                    Vertex::Ground(t) => ground_orders[t][i] += 1,
                }
            }
        }
        let mut coeff = Polynomial::one(dim);
        for j in 0..g.n {
            let c = per_vertex[j][choice[j]].1.derivative_multi(&aerial_orders[j]);
            coeff = &coeff * &c;
            if coeff.is_zero() {
                break;
            }
        }
        if !coeff.is_zero() {
            out.add_term(ground_orders, coeff);
        }
        let mut p = 0;
        loop {
            if p == g.n {
                return Ok(out.scale_sign(sign));
            }
            choice[p] += 1;
            if choice[p] < per_vertex[p].len() {
                break;
            }
            choice[p] = 0;
            p += 1;
        }
    }
}

/// Codimension-one boundary strata of `C+_{n,m}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum BoundaryFace {
    /// Aerial points `cluster` (at least two) collapse to one aerial point.
    Aerial { cluster: Vec<usize> },
    /// Aerial points `cluster` and the consecutive ground points
    /// `q_l..q_{l+len-1}` collapse to one ground point placed after the
    /// first `l` remaining ground points.
    Ground { cluster: Vec<usize>, l: usize, len: usize },
}

fn subsets(n: usize) -> Vec<Vec<usize>> {
    (0u64..(1 << n)).map(|mask| (0..n).filter(|&k| mask & (1 << k) != 0).collect()).collect()
}

pub fn enumerate_faces(n: usize, m: usize) -> Vec<BoundaryFace> {
    let mut out = Vec::new();
    for s in subsets(n) {
        if s.len() >= 2 {
            out.push(BoundaryFace::Aerial { cluster: s.clone() });
        }
    }
    for s in subsets(n) {
        let n1 = s.len();
        for len in 0..=m {
            let positions = if len == 0 { m + 1 } else { m - len + 1 };
            for l in 0..positions {
                if n + m > n1 + len && 2 * n1 + len >= 2 {
                    out.push(BoundaryFace::Ground { cluster: s.clone(), l, len });
                }
            }
        }
    }
    out
}

impl BoundaryFace {
    /// `Ω_F = sign · Ω_1 ∧ Ω_2`.
    pub fn orientation_sign(&self) -> Sign {
        match self {
            BoundaryFace::Aerial { .. } => Sign::MINUS,
            BoundaryFace::Ground { l, len, .. } => {
                let (l, m1) = (*l as i64, *len as i64);
                Sign::pow(l * m1 + l + m1)
            }
        }
    }
}

/// Restriction of a graph to a face: the graph on the collapsed cluster, the
/// graph on the remaining configuration, and `ε(σ)` for listing the inner
/// edges before the outer ones. Both factor graphs keep the induced edge
/// order.
#[derive(Clone, Debug)]
pub struct Collapse {
    pub inner: AdmissibleGraph,
    pub outer: AdmissibleGraph,
    pub sign: Sign,
    /// Cluster of three or more aerial points: the inner integral vanishes.
    pub vanishing: bool,
}

fn split_edges(
    graph: &AdmissibleGraph,
    inner_of: impl Fn(&Edge) -> Option<Edge>,
    outer_of: impl Fn(&Edge) -> Option<Option<Edge>>,
) -> Option<(Vec<Edge>, Vec<Edge>, Sign)> {
    let mut inner = Vec::new();
    let mut outer = Vec::new();
    let mut inner_idx = Vec::new();
    let mut outer_idx = Vec::new();
    for (k, e) in graph.edges.iter().enumerate() {
        if let Some(ie) = inner_of(e) {
            inner.push(ie);
            inner_idx.push(k);
        } else {
            match outer_of(e)? {
                Some(oe) => {
                    if outer.contains(&oe) {
                        return None;
                    }
                    outer.push(oe);
                    outer_idx.push(k);
                }
                None => return None,
            }
        }
    }
    let seq: Vec<usize> = inner_idx.iter().chain(&outer_idx).copied().collect();
    let sign = reorder_sign(&seq, &vec![true; seq.len()]);
    Some((inner, outer, sign))
}

/// Collapse of aerial points `cluster` to a new aerial point, placed first
/// among the outer aerial vertices. `None` when the restricted form vanishes
/// identically (a cluster of two with no edge inside, or a doubled outer
/// edge).
pub fn collapse_aerial(graph: &AdmissibleGraph, cluster: &[usize]) -> Option<Collapse> {
    let inner_index = |v: usize| cluster.iter().position(|&c| c == v);
    let rest: Vec<usize> = (0..graph.n).filter(|v| !cluster.contains(v)).collect();
    let outer_index = |v: usize| match inner_index(v) {
        Some(_) => 0,
        None => 1 + rest.iter().position(|&r| r == v).expect("vertex outside cluster"),
    };
    let (inner, outer, sign) = split_edges(
        graph,
        |e| match (inner_index(e.source), e.target) {
            (Some(s), Vertex::Aerial(t)) => inner_index(t).map(|t| Edge::new(s, Vertex::Aerial(t))),
            _ => None,
        },
        |e| {
            let s = outer_index(e.source);
            let t = match e.target {
                Vertex::Aerial(t) => Vertex::Aerial(outer_index(t)),
                g => g,
            };
            Some(Some(Edge::new(s, t)))
        },
    )?;
    if cluster.len() == 2 && inner.is_empty() {
        return None;
    }
    Some(Collapse {
        inner: AdmissibleGraph { n: cluster.len(), m: 0, edges: inner },
        outer: AdmissibleGraph { n: rest.len() + 1, m: graph.m, edges: outer },
        sign,
        vanishing: cluster.len() >= 3,
    })
}

/// Collapse of aerial points `cluster` and ground points `q_l..q_{l+len-1}`
/// to a ground point. `None` when an edge leaves the cluster (its angle form
/// vanishes on the face) or an outer edge doubles.
pub fn collapse_ground(graph: &AdmissibleGraph, cluster: &[usize], l: usize, len: usize) -> Option<Collapse> {
    let in_segment = |q: usize| q >= l && q < l + len;
    let inner_index = |v: usize| cluster.iter().position(|&c| c == v);
    let rest: Vec<usize> = (0..graph.n).filter(|v| !cluster.contains(v)).collect();
    let rest_index = |v: usize| rest.iter().position(|&r| r == v).expect("vertex outside cluster");
    let outer_ground = |q: usize| if q < l { q } else { q - len + 1 };
    let (inner, outer, sign) = split_edges(
        graph,
        |e| {
            let s = inner_index(e.source)?;
            match e.target {
                Vertex::Aerial(t) => inner_index(t).map(|t| Edge::new(s, Vertex::Aerial(t))),
                Vertex::Ground(q) if in_segment(q) => Some(Edge::new(s, Vertex::Ground(q - l))),
                _ => None,
            }
        },
        |e| {
            if inner_index(e.source).is_some() {
                return None;
            }
            let s = rest_index(e.source);
            let t = match e.target {
                Vertex::Aerial(t) if inner_index(t).is_some() => Vertex::Ground(l),
                Vertex::Aerial(t) => Vertex::Aerial(rest_index(t)),
                Vertex::Ground(q) if in_segment(q) => Vertex::Ground(l),
                Vertex::Ground(q) => Vertex::Ground(outer_ground(q)),
            };
            Some(Some(Edge::new(s, t)))
        },
    )?;
    Some(Collapse {
        inner: AdmissibleGraph { n: cluster.len(), m: len, edges: inner },
        outer: AdmissibleGraph { n: rest.len(), m: graph.m - len + 1, edges: outer },
        sign,
        vanishing: false,
    })
}

pub fn collapse(graph: &AdmissibleGraph, face: &BoundaryFace) -> Option<Collapse> {
    match face {
        BoundaryFace::Aerial { cluster } => collapse_aerial(graph, cluster),
        BoundaryFace::Ground { cluster, l, len } => collapse_ground(graph, cluster, *l, *len),
    }
}

/// `|k_I|! |k_J|! / |k|!`, relating the normalized forms of a graph and of
/// its two factor graphs on a face.
pub fn orientation_multiplicity(inner_edges: usize, outer_edges: usize) -> Rational {
    let f = |k: usize| -> num_bigint::BigInt { (1..=k as u64).map(num_bigint::BigInt::from).product() };
    Rational::new(f(inner_edges) * f(outer_edges), f(inner_edges + outer_edges))
}
