//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use common::{ground_angle_gradient, multivector, operator, rng, tanh_sinh, x};
use formality::dpoly;
use formality::graded::{reorder_sign, unshuffle_sign, DegreeVector, Sign};
use formality::graphs::enumerate_graphs;
use formality::linfinity::formality::{
    bound_operator, bound_polynomial, formality_residual, maurer_cartan_residual_tpoly, star_product,
    KontsevichMorphism, ResidualBound,
};
use formality::linfinity::series::FormalSeries;
use formality::linfinity::symbolic::{coderivation_residual, morphism_residual, AbstractFamily, Symbol};
use formality::scalar::{rat, Coefficient};
use formality::weights::{cluster_weight_mc, stokes_residual, weight_mc, Chart, McConfig, MonteCarloProvider};
use formality::{AdmissibleGraph, Edge, MultiVector, PolyDiffOperator, Polynomial, Vertex};
use rand::Rng;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn exact(failures: usize, cases: usize) -> Outcome {
    outcome(failures == 0, format!("{} of {} cases nonzero", failures, cases))
}

fn graph(n: usize, m: usize, e: &[(usize, Vertex)]) -> AdmissibleGraph {
    AdmissibleGraph::new(n, m, e.iter().map(|&(s, t)| Edge::new(s, t)).collect()).unwrap()
}

fn lie_degree(a: &MultiVector) -> i64 {
    a.order() as i64 - 1
}

fn signs() -> Outcome {
    let mut bad = 0;
    for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        if unshuffle_sign(&DegreeVector::new(vec![a, b])) != Sign::pow(a * (b - 1)) {
            bad += 1;
        }
    }
    let mut r = rng(1);
    for _ in 0..200 {
        let n = r.gen_range(1..=6);
        let odd: Vec<bool> = (0..n).map(|_| r.gen_bool(0.5)).collect();
        let first: Vec<bool> = (0..n).map(|_| r.gen_bool(0.5)).collect();
        let (i, j): (Vec<usize>, Vec<usize>) = (0..n).partition(|&k| first[k]);
        let ij: Vec<usize> = i.iter().chain(&j).copied().collect();
        let ji: Vec<usize> = j.iter().chain(&i).copied().collect();
        let oi = i.iter().filter(|&&k| odd[k]).count() as i64;
        let oj = j.iter().filter(|&&k| odd[k]).count() as i64;
        if reorder_sign(&ij, &odd) != reorder_sign(&ji, &odd) * Sign::pow(oi * oj) {
            bad += 1;
        }
    }
    exact(bad, 204)
}

fn brackets() -> Outcome {
    let mut r = rng(2);
    let mut bad = 0;
    let cases = 100;
    for _ in 0..cases {
        let dim = r.gen_range(1..=3);
        let mut mk = || {
            let k = r.gen_range(0..=dim);
            multivector(&mut r, dim, k, 2)
        };
        let (a, b, c) = (mk(), mk(), mk());
        let (da, db, dc) = (lie_degree(&a), lie_degree(&b), lie_degree(&c));
        let ab = a.bracket_prime(&b);
        let ba = b.bracket_prime(&a).scale_sign(-Sign::pow(da * db));
        let t1 = a.bracket_prime(&b.bracket_prime(&c)).scale_sign(Sign::pow(da * dc));
        let t2 = b.bracket_prime(&c.bracket_prime(&a)).scale_sign(Sign::pow(db * da));
        let t3 = c.bracket_prime(&a.bracket_prime(&b)).scale_sign(Sign::pow(dc * db));
        let failed = !ab.sub(&ba).is_zero()
            || !t1.add(&t2).add(&t3).is_zero()
            || !ab.sub(&a.bracket_prime_via_bullet(&b)).is_zero()
            || !a.schouten(&b).sub(&common::schouten_oracle(&a, &b)).is_zero();
        bad += usize::from(failed);
    }
    exact(bad, cases)
}

fn hochschild() -> Outcome {
    let mut r = rng(3);
    let mut bad = 0;
    let cases = 100;
    for _ in 0..cases {
        let dim = r.gen_range(1..=2);
        let a = {
            let k = r.gen_range(0..=3);
            operator(&mut r, dim, k, 2)
        };
        let b = {
            let k = r.gen_range(0..=3);
            operator(&mut r, dim, k, 1)
        };
        let q1 = dpoly::q1(&a);
        let leibniz = a.coboundary().gerstenhaber(&b).add(&a.gerstenhaber(&b.coboundary()).scale_sign(Sign::pow(a.degree())));
        let failed = !a.hochschild().hochschild().is_zero()
            || !q1.add(&a.hochschild()).is_zero()
            || !q1.sub(&dpoly::q1_via_bracket(&a)).is_zero()
            || !q1.sub(&a.coboundary().scale_sign(Sign::pow(a.degree()))).is_zero()
            || !a.gerstenhaber(&b).coboundary().sub(&leibniz).is_zero();
        bad += usize::from(failed);
    }
    exact(bad, cases)
}

fn coalgebra() -> Outcome {
    let mut r = rng(4);
    let mut bad = 0;
    let cases = 50;
    for _ in 0..cases {
        let n = r.gen_range(1..=4);
        let word: Vec<Symbol> = (0..n).map(|i| Symbol::letter(i as u32, r.gen_range(-1..=2))).collect();
        let arities: Vec<usize> = (1..=4).filter(|_| r.gen_bool(0.7)).collect();
        let q = AbstractFamily::new("Q", 1, &arities);
        let f = AbstractFamily::new("F", 0, &arities);
        bad += usize::from(!coderivation_residual(&q, &word).is_zero() || !morphism_residual(&f, &word).is_zero());
    }
    exact(bad, cases)
}

fn single_edge() -> Outcome {
    let e = graph(1, 1, &[(0, Vertex::Ground(0))]);
    let analytic = weight_mc(&e, &McConfig::default()).unwrap();
    let cfg = McConfig::default().with_samples(100_000).with_chart(Chart::FixAerial { aerial: 0 });
    let mc = weight_mc(&e, &cfg).unwrap();
    let pass = analytic.mean == 1.0 && analytic.stderr == 0.0 && mc.stderr < 0.01 && (mc.mean - 1.0).abs() <= 3.0 * mc.stderr;
    outcome(pass, format!("analytic {} MC {:.6} ± {:.6}", analytic.mean, mc.mean, mc.stderr))
}

fn wedge_quadrature() -> f64 {
    let integrand = |rho: f64, theta: f64| {
        let (da, db) = ground_angle_gradient(rho * theta.cos(), rho * theta.sin(), 1.0);
        -2.0 * (theta.cos() * da + theta.sin() * db)
    };
    let inner = |theta: f64| {
        tanh_sinh(|rho| integrand(rho, theta), 6) + tanh_sinh(|s| integrand(1.0 / s, theta) / (s * s), 6)
    };
    PI * tanh_sinh(|t| inner(PI * t), 6) / ((2.0 * PI).powi(2) * 2.0)
}

fn charts() -> Outcome {
    let wedge = graph(1, 2, &[(0, Vertex::Ground(0)), (0, Vertex::Ground(1))]);
    let oracle = wedge_quadrature();
    let charts = [
        Chart::FixAerial { aerial: 0 },
        Chart::FixAerialAndGround { aerial: 0, ground: 0 },
        Chart::FixAerialAndGround { aerial: 0, ground: 1 },
        Chart::FixTwoGround { first: 0, second: 1 },
    ];
    let ws: Vec<_> = charts
        .iter()
        .map(|&c| weight_mc(&wedge, &McConfig::default().with_samples(100_000).with_chart(c)).unwrap())
        .collect();
    let mut pass = true;
    for a in &ws {
        pass &= (a.mean - oracle).abs() <= 3.0 * a.stderr;
        for b in &ws {
            pass &= (a.mean - b.mean).abs() <= 3.0 * (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
        }
    }
    let means: Vec<String> = ws.iter().map(|w| format!("{:.5}±{:.5}", w.mean, w.stderr)).collect();
    outcome(pass, format!("quadrature {:.8} charts {}", oracle, means.join(" ")))
}

fn stokes() -> Outcome {
    let cfg = McConfig::default().with_samples(100_000);
    let mut graphs = enumerate_graphs(1, 2, 1);
    graphs.extend(enumerate_graphs(2, 1, 2));
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for g in &graphs {
        let rep = stokes_residual(g, &cfg).unwrap();
        pass &= rep.stderr < 0.02 && rep.total.abs() <= 3.0 * rep.stderr + 1e-12;
        if rep.stderr > 0.0 {
            worst = worst.max(rep.total.abs() / rep.stderr);
        }
    }
    outcome(pass, format!("{} graphs, worst |r|/σ = {:.2}", graphs.len(), worst))
}

fn triangle() -> Outcome {
    let tri = graph(3, 0, &[(0, Vertex::Aerial(1)), (1, Vertex::Aerial(2)), (2, Vertex::Aerial(0))]);
    let w = cluster_weight_mc(&tri, &McConfig::default().with_samples(100_000)).unwrap();
    outcome(w.mean.abs() <= 3.0 * w.stderr, format!("{:.6} ± {:.6}", w.mean, w.stderr))
}

fn formality_one() -> Outcome {
    let provider = MonteCarloProvider::new(McConfig::default().with_samples(1000));
    let u = KontsevichMorphism::new(&provider);
    let mut r = rng(9);
    let mut bad = 0;
    let cases = 20;
    for i in 0..cases {
        let a = multivector(&mut r, 2, 1 + i % 2, 2);
        bad += usize::from(formality_residual(&u, &[a]).unwrap().is_some_and(|v| !v.is_zero()));
    }
    exact(bad, cases)
}

fn monomials(dim: usize, max_degree: u32) -> Vec<Polynomial> {
    let mut out = vec![Polynomial::one(dim)];
    let mut last = out.clone();
    for _ in 0..max_degree {
        let mut next: Vec<Polynomial> = Vec::new();
        for p in &last {
            for i in 0..dim {
                let q = p * &x(dim, i);
                if !next.contains(&q) {
                    next.push(q);
                }
            }
        }
        out.extend(next.iter().cloned());
        last = next;
    }
    out
}

fn moyal_square<R: Coefficient>(b1: &PolyDiffOperator<R>) -> PolyDiffOperator<R> {
    let mut out = PolyDiffOperator::zero(b1.dim(), 2);
    for (o1, c1) in b1.terms() {
        for (o2, c2) in b1.terms() {
            let f: Vec<u32> = o1[0].iter().zip(&o2[0]).map(|(a, b)| a + b).collect();
            let g: Vec<u32> = o1[1].iter().zip(&o2[1]).map(|(a, b)| a + b).collect();
            out.add_term(vec![f, g], (c1 * c2).scale_rational(&rat(1, 2)));
        }
    }
    out
}

fn merge(acc: &mut ResidualBound, b: &ResidualBound) {
    acc.max_abs = acc.max_abs.max(b.max_abs);
    acc.max_sigma = acc.max_sigma.max(b.max_sigma);
    acc.worst_ratio = acc.worst_ratio.max(b.worst_ratio);
    acc.exact_zero &= b.exact_zero;
}

fn empty_bound() -> ResidualBound {
    ResidualBound { max_abs: 0.0, max_sigma: 0.0, worst_ratio: 0.0, exact_zero: true }
}

fn within(b: &ResidualBound) -> bool {
    b.worst_ratio <= 3.0 && b.max_sigma < 0.02
}

fn constant_poisson() -> MultiVector {
    MultiVector::term(2, &[0, 1], Polynomial::one(2)).unwrap()
}

fn associativity() -> Outcome {
    let provider = MonteCarloProvider::new(McConfig::default().with_samples(200_000));
    let star = star_product(&constant_poisson(), 2, &provider).unwrap();
    let mons = monomials(2, 2);
    let mut per_order = vec![empty_bound(); 3];
    for f in &mons {
        for g in &mons {
            for h in &mons {
                for (k, c) in star.associator(f, g, h).iter().enumerate() {
                    merge(&mut per_order[k], &bound_polynomial(c, &star.estimates));
                }
            }
        }
    }
    let s = &star.series;
    let moyal = bound_operator(Some(&s.coefficient(2).sub(&moyal_square(s.coefficient(1)))), &star.estimates);
    let pass = per_order[0].exact_zero && per_order[1].exact_zero && within(&per_order[2]) && within(&moyal);
    outcome(
        pass,
        format!(
            "ħ^0 exact {} ħ^1 exact {} ħ^2 worst |c|/σ = {:.2} σ = {:.4}; Moyal worst |c|/σ = {:.2}",
            per_order[0].exact_zero, per_order[1].exact_zero, per_order[2].worst_ratio, per_order[2].max_sigma, moyal.worst_ratio
        ),
    )
}

fn transport() -> Outcome {
    let mut so3 = MultiVector::zero(3, 2);
    so3.add_term(&[0, 1], x(3, 2));
    so3.add_term(&[1, 2], x(3, 0));
    so3.add_term(&[2, 0], x(3, 1));
    let v = FormalSeries::monomial(MultiVector::zero(3, 2), so3, 1, 3);
    let tpoly_zero = maurer_cartan_residual_tpoly(&v).unwrap().iter().all(|t| t.as_ref().map_or(true, |t| t.is_zero()));
    let provider = MonteCarloProvider::new(McConfig::default().with_samples(200_000));
    let star = star_product(&constant_poisson(), 2, &provider).unwrap();
    let mut b = empty_bound();
    for res in star.maurer_cartan_residual() {
        merge(&mut b, &bound_operator(Some(&res), &star.estimates));
    }
    outcome(
        tpoly_zero && within(&b),
        format!("so(3) residual exact zero {}; D_poly residual worst |c|/σ = {:.2} σ = {:.4}", tpoly_zero, b.worst_ratio, b.max_sigma),
    )
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 11] = [
        ("1 signs", signs, secs(1)),
        ("2 brackets", brackets, secs(30)),
        ("3 hochschild", hochschild, secs(30)),
        ("4 coalgebra", coalgebra, secs(30)),
        ("5 single-edge weight", single_edge, secs(10)),
        ("6 chart independence", charts, secs(60)),
        ("7 stokes", stokes, secs(300)),
        ("8 triangle cluster", triangle, secs(60)),
        ("9 formality n=1", formality_one, secs(10)),
        ("10 associativity", associativity, secs(600)),
        ("11 maurer-cartan transport", transport, secs(600)),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let pass = o.pass && elapsed <= budget;
        failed += usize::from(!pass);
        println!(
            "{} {}: {} ({:.2} s, budget {} s)",
            if pass { "PASS" } else { "FAIL" },
            name,
            o.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failed > 0 {
        println!("{} criteria failed", failed);
        std::process::exit(1);
    }
}
