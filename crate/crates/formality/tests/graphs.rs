mod common;

use common::{multivector, poly, rng};
use formality::formats::{parse_graphs, write_graphs};
use formality::graphs::{
    collapse, enumerate_faces, enumerate_graphs, enumerate_with_out_degrees, graph_operator, BoundaryFace,
};
use formality::{AdmissibleGraph, Edge, MultiVector, Polynomial, Vertex};
use proptest::prelude::*;
use std::collections::HashSet;

fn all_edges(n: usize, m: usize) -> Vec<Edge> {
    let mut out = Vec::new();
    for s in 0..n {
        for q in 0..m {
            out.push(Edge::new(s, Vertex::Ground(q)));
        }
        for t in (0..n).filter(|&t| t != s) {
            out.push(Edge::new(s, Vertex::Aerial(t)));
        }
    }
    out
}

/// Edge sets of size `e` by bitmask, without any canonical form.
fn brute_force_count(n: usize, m: usize, e: usize) -> usize {
    let edges = all_edges(n, m);
    (0u64..1 << edges.len()).filter(|mask| mask.count_ones() as usize == e).count()
}

#[test]
fn enumeration_matches_brute_force() {
    for (n, m, e) in [(1, 2, 2), (2, 0, 2), (2, 2, 4), (2, 1, 2), (2, 1, 3), (3, 0, 3), (1, 3, 3)] {
        let gs = enumerate_graphs(n, m, e);
        assert_eq!(gs.len(), brute_force_count(n, m, e), "n={} m={} e={}", n, m, e);
        let keys: HashSet<String> = gs.iter().map(|g| g.key()).collect();
        assert_eq!(keys.len(), gs.len());
        assert!(gs.iter().all(|g| g.is_canonical() && g.num_edges() == e));
    }
    assert_eq!(enumerate_graphs(1, 2, 2).len(), 1);
    assert_eq!(enumerate_graphs(2, 0, 2).len(), 1);
    assert_eq!(enumerate_graphs(2, 2, 4).len(), 15);
    assert_eq!(enumerate_graphs(2, 1, 2).len(), 6);
}

#[test]
fn out_degree_enumeration_is_a_filter() {
    let by_degree = enumerate_with_out_degrees(2, 2, &[2, 2]);
    let filtered: Vec<_> = enumerate_graphs(2, 2, 4).into_iter().filter(|g| g.out_degrees() == vec![2, 2]).collect();
    assert_eq!(by_degree.len(), filtered.len());
    assert_eq!(by_degree.len(), 9);
}

#[test]
fn inadmissible_graphs_are_rejected() {
    assert!(AdmissibleGraph::new(1, 1, vec![Edge::new(0, Vertex::Aerial(0))]).is_err());
    assert!(AdmissibleGraph::new(1, 1, vec![Edge::new(1, Vertex::Ground(0))]).is_err());
    assert!(AdmissibleGraph::new(1, 1, vec![Edge::new(0, Vertex::Ground(1))]).is_err());
    let e = Edge::new(0, Vertex::Ground(0));
    assert!(AdmissibleGraph::new(1, 1, vec![e, e]).is_err());
}

/// Literal sum over index labelings of the edges.
fn operator_oracle(graph: &AdmissibleGraph, alphas: &[MultiVector], fs: &[Polynomial]) -> Polynomial {
    let dim = alphas[0].dim();
    let edges = graph.edges();
    let e = edges.len();
    let mut out = Polynomial::zero(dim);
    let mut labels = vec![0usize; e];
    loop {
        let mut term = Polynomial::one(dim);
        for (j, alpha) in alphas.iter().enumerate() {
            let tuple: Vec<usize> = (0..e).filter(|&k| edges[k].source == j).map(|k| labels[k]).collect();
            let mut c = alpha.component(&tuple);
            for k in (0..e).filter(|&k| edges[k].target == Vertex::Aerial(j)) {
                c = c.derivative(labels[k]);
            }
            term = &term * &c;
        }
        for (l, f) in fs.iter().enumerate() {
            let mut g = f.clone();
            for k in (0..e).filter(|&k| edges[k].target == Vertex::Ground(l)) {
                g = g.derivative(labels[k]);
            }
            term = &term * &g;
        }
        out = &out + &term;
        let mut p = 0;
        loop {
            if p == e {
                return out;
            }
            labels[p] += 1;
            if labels[p] < dim {
                break;
            }
            labels[p] = 0;
            p += 1;
        }
    }
}

#[test]
fn graph_operator_matches_labeling_sum() {
    let mut r = rng(31);
    for (n, m, ks) in [(1, 2, vec![2]), (2, 2, vec![2, 2]), (2, 1, vec![2, 1]), (2, 3, vec![2, 3])] {
        let dim = 3;
        for g in enumerate_with_out_degrees(n, m, &ks) {
            let alphas: Vec<MultiVector> = ks.iter().map(|&k| multivector(&mut r, dim, k, 2)).collect();
            let fs: Vec<Polynomial> = (0..m).map(|_| poly(&mut r, dim, 3)).collect();
            let op = graph_operator(&g, &alphas).unwrap();
            assert_eq!(op.apply(&fs), operator_oracle(&g, &alphas, &fs), "graph {}", g.key());
        }
    }
}

#[test]
fn graph_operator_times_sign_is_order_independent() {
    let mut r = rng(32);
    let dim = 2;
    let alphas = vec![multivector(&mut r, dim, 2, 2), multivector(&mut r, dim, 2, 2)];
    for g in enumerate_with_out_degrees(2, 2, &[2, 2]) {
        let base = graph_operator(&g, &alphas).unwrap();
        for perm in [[1, 0, 2, 3], [3, 2, 1, 0], [2, 0, 3, 1]] {
            let (h, s) = g.reorder(&perm).unwrap();
            assert_eq!(graph_operator(&h, &alphas).unwrap().scale_sign(s), base);
        }
    }
}

#[test]
fn star_graph_gives_antisymmetric_bracket() {
    let dim = 2;
    let pi = MultiVector::term(dim, &[0, 1], &common::x(dim, 0) * &common::x(dim, 1)).unwrap();
    let g = &enumerate_graphs(1, 2, 2)[0];
    let op = graph_operator(g, &[pi]).unwrap();
    let mut r = rng(33);
    for _ in 0..10 {
        let (f, h) = (poly(&mut r, dim, 3), poly(&mut r, dim, 3));
        let fh = op.apply(&[f.clone(), h.clone()]);
        let hf = op.apply(&[h.clone(), f.clone()]);
        assert!((&fh + &hf).is_zero());
        let poisson = &common::x(dim, 0) * &common::x(dim, 1);
        let expected = &poisson * &(&(&f.derivative(0) * &h.derivative(1)) - &(&f.derivative(1) * &h.derivative(0)));
        assert_eq!(fh, expected);
    }
}

#[test]
fn face_counts() {
    let count = |n, m| {
        let faces = enumerate_faces(n, m);
        let aerial = faces.iter().filter(|f| matches!(f, BoundaryFace::Aerial { .. })).count();
        (aerial, faces.len() - aerial)
    };
    assert_eq!(count(2, 0), (1, 2));
    assert_eq!(count(1, 2), (0, 6));
    assert_eq!(count(3, 0).0, 4);
}

#[test]
fn collapse_of_edge_between_clustered_points() {
    let g = AdmissibleGraph::new(
        2,
        1,
        vec![Edge::new(0, Vertex::Aerial(1)), Edge::new(1, Vertex::Ground(0))],
    )
    .unwrap();
    let c = collapse(&g, &BoundaryFace::Aerial { cluster: vec![0, 1] }).unwrap();
    assert_eq!(c.inner.num_edges(), 1);
    assert_eq!(c.outer.n(), 1);
    assert_eq!(c.outer.edges(), &[Edge::new(0, Vertex::Ground(0))]);
    assert!(!c.vanishing);
    let leaving = collapse(&g, &BoundaryFace::Ground { cluster: vec![0], l: 0, len: 0 });
    assert!(leaving.is_none());
}

fn arb_graph() -> impl Strategy<Value = AdmissibleGraph> {
    (1usize..=3, 0usize..=3).prop_flat_map(|(n, m)| {
        let edges = all_edges(n, m);
        let len = edges.len();
        proptest::sample::subsequence(edges, 0..=len.min(6))
            .prop_shuffle()
            .prop_map(move |es| AdmissibleGraph::new(n, m, es).unwrap())
    })
}

proptest! {
    #[test]
    fn graph_text_roundtrip(gs in proptest::collection::vec(arb_graph(), 1..4)) {
        let parsed = parse_graphs(&write_graphs(&gs)).unwrap();
        prop_assert_eq!(parsed, gs);
    }

    #[test]
    fn canonical_form_is_idempotent(g in arb_graph()) {
        let (c, _) = g.canonical();
        let (c2, s2) = c.canonical();
        prop_assert_eq!(&c, &c2);
        prop_assert!(!s2.is_negative());
        prop_assert_eq!(c.hash(), g.canonical().0.hash());
    }
}
