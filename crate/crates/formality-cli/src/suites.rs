//! Verification suites run by `formality verify`.

use crate::inputs;
use anyhow::{bail, Result};
use formality::dpoly;
use formality::graded::{reorder_sign, unshuffle_sign, DegreeVector, Sign};
use formality::graphs::enumerate_graphs;
use formality::linfinity::formality::{
    bound_operator, bound_polynomial, formality_residual, maurer_cartan_residual_tpoly, star_product,
    KontsevichMorphism, ResidualBound,
};
use formality::linfinity::series::FormalSeries;
use formality::linfinity::symbolic::{coderivation_residual, morphism_residual};
use formality::linfinity::family::{master_residual, Hochschild, SchoutenStructure};
use formality::scalar::{rat, Coefficient, Rational};
use formality::weights::{stokes_residual, McConfig, MonteCarloProvider};
use formality::{MultiVector, PolyDiffOperator, Polynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Check {
    pub name: String,
    pub tolerance: String,
    pub observed: String,
    pub pass: bool,
}

impl Check {
    fn exact(name: &str, failures: usize, cases: usize) -> Check {
        Check {
            name: name.into(),
            tolerance: "exact".into(),
            observed: format!("{} of {} cases nonzero", failures, cases),
            pass: failures == 0,
        }
    }
}

pub struct Settings {
    pub seed: u64,
    pub config: McConfig,
    pub n: usize,
    pub m: usize,
    pub dim: usize,
    pub order: usize,
    pub poisson: Option<MultiVector>,
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn lie_degree(a: &MultiVector) -> i64 {
    a.order() as i64 - 1
}

pub fn algebra(s: &Settings) -> Vec<Check> {
    let mut r = rng(s.seed);
    let mut out = Vec::new();

    let mut bad = 0;
    for (x, y) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let expected = Sign::pow(x * (y - 1));
        if unshuffle_sign(&DegreeVector::new(vec![x, y])) != expected {
            bad += 1;
        }
    }
    out.push(Check::exact("unshuffle sign on parity pairs", bad, 4));

    let mut bad = 0;
    for _ in 0..200 {
        let n = r.gen_range(1..=6);
        let odd: Vec<bool> = (0..n).map(|_| r.gen_bool(0.5)).collect();
        let in_first: Vec<bool> = (0..n).map(|_| r.gen_bool(0.5)).collect();
        let (i, j): (Vec<usize>, Vec<usize>) = (0..n).partition(|&k| in_first[k]);
        let ij: Vec<usize> = i.iter().chain(&j).copied().collect();
        let ji: Vec<usize> = j.iter().chain(&i).copied().collect();
        let oi = i.iter().filter(|&&k| odd[k]).count() as i64;
        let oj = j.iter().filter(|&&k| odd[k]).count() as i64;
        if reorder_sign(&ij, &odd) != reorder_sign(&ji, &odd) * Sign::pow(oi * oj) {
            bad += 1;
        }
    }
    out.push(Check::exact("block swap ε(I,J) = ε(J,I)(-1)^{odd(I)odd(J)}", bad, 200));

    let cases = 100;
    let (mut anti, mut jac, mut two) = (0, 0, 0);
    for _ in 0..cases {
        let dim = r.gen_range(1..=3);
        let mk = |r: &mut ChaCha8Rng| {
            let k = r.gen_range(0..=dim.min(3));
            inputs::multivector(r, dim, k, 2)
        };
        let (a, b, c) = (mk(&mut r), mk(&mut r), mk(&mut r));
        let ab = a.bracket_prime(&b);
        let ba = b.bracket_prime(&a).scale_sign(-Sign::pow(lie_degree(&a) * lie_degree(&b)));
        if !ab.sub(&ba).is_zero() {
            anti += 1;
        }
        let (da, db, dc) = (lie_degree(&a), lie_degree(&b), lie_degree(&c));
        let t1 = a.bracket_prime(&b.bracket_prime(&c)).scale_sign(Sign::pow(da * dc));
        let t2 = b.bracket_prime(&c.bracket_prime(&a)).scale_sign(Sign::pow(db * da));
        let t3 = c.bracket_prime(&a.bracket_prime(&b)).scale_sign(Sign::pow(dc * db));
        if !t1.add(&t2).add(&t3).is_zero() {
            jac += 1;
        }
        if !ab.sub(&a.bracket_prime_via_bullet(&b)).is_zero() {
            two += 1;
        }
    }
    out.push(Check::exact("graded antisymmetry of [,]'", anti, cases));
    out.push(Check::exact("graded Jacobi of [,]'", jac, cases));
    out.push(Check::exact("[,]' via bullet identity", two, cases));

    let (mut sq, mut q1, mut leib) = (0, 0, 0);
    for _ in 0..cases {
        let dim = r.gen_range(1..=2);
        let a = { let k = r.gen_range(0..=2); inputs::operator(&mut r, dim, k, 2) };
        let b = { let k = r.gen_range(0..=2); inputs::operator(&mut r, dim, k, 2) };
        if !a.hochschild().hochschild().is_zero() {
            sq += 1;
        }
        let via_d = a.coboundary().scale_sign(Sign::pow(a.degree()));
        if !dpoly::q1(&a).sub(&dpoly::q1_via_bracket(&a)).is_zero() || !dpoly::q1(&a).sub(&via_d).is_zero() {
            q1 += 1;
        }
        let lhs = a.gerstenhaber(&b).coboundary();
        let rhs = a
            .coboundary()
            .gerstenhaber(&b)
            .add(&a.gerstenhaber(&b.coboundary()).scale_sign(Sign::pow(a.degree())));
        if !lhs.sub(&rhs).is_zero() {
            leib += 1;
        }
    }
    out.push(Check::exact("d_H² = 0", sq, cases));
    out.push(Check::exact("Q'_1 = -d_H = [·, μ]_G = (-1)^{|A|} d", q1, cases));
    out.push(Check::exact("graded Leibniz of d over [,]_G", leib, cases));

    let mut bad = 0;
    let dim = 2;
    for _ in 0..20 {
        let xs: Vec<MultiVector> = (0..3).map(|_| { let k = r.gen_range(1..=2); inputs::multivector(&mut r, dim, k, 2) }).collect();
        if master_residual(&SchoutenStructure, &xs).ok().flatten().is_some_and(|v| !v.is_zero()) {
            bad += 1;
        }
        let ys: Vec<PolyDiffOperator> = (0..3).map(|_| { let k = r.gen_range(0..=2); inputs::operator(&mut r, dim, k, 1) }).collect();
        if master_residual(&Hochschild::<Rational>::default(), &ys).ok().flatten().is_some_and(|v| !v.is_zero()) {
            bad += 1;
        }
    }
    out.push(Check::exact("master equation π Q Q = 0 up to n = 3", bad, 40));
    out
}

pub fn coalgebra(s: &Settings) -> Vec<Check> {
    let mut r = rng(s.seed);
    let cases = 50;
    let (mut cod, mut mor) = (0, 0);
    for _ in 0..cases {
        let n = r.gen_range(1..=4);
        let w = inputs::word(&mut r, n);
        let q = inputs::family(&mut r, "Q", 1, 4);
        let f = inputs::family(&mut r, "F", 0, 4);
        if !coderivation_residual(&q, &w).is_zero() {
            cod += 1;
        }
        if !morphism_residual(&f, &w).is_zero() {
            mor += 1;
        }
    }
    vec![
        Check::exact("coderivation extension is a coderivation", cod, cases),
        Check::exact("morphism extension is a coalgebra map", mor, cases),
    ]
}

fn sigma_check(name: String, value: f64, stderr: f64, max_stderr: f64) -> Check {
    Check {
        name,
        tolerance: format!("|r| <= 3σ, σ < {}", max_stderr),
        observed: format!("r = {:.6} σ = {:.6}", value, stderr),
        pass: value.abs() <= 3.0 * stderr + 1e-12 && stderr < max_stderr,
    }
}

pub fn stokes(s: &Settings) -> Result<Vec<Check>> {
    let e = 2 * s.n as i64 + s.m as i64 - 3;
    if e < 0 {
        bail!("no graphs with 2n + m - 3 edges for n = {}, m = {}", s.n, s.m);
    }
    let mut out = Vec::new();
    for g in enumerate_graphs(s.n, s.m, e as usize) {
        let rep = stokes_residual(&g, &s.config)?;
        out.push(sigma_check(format!("stokes {}", g.key()), rep.total, rep.stderr, 0.02));
    }
    Ok(out)
}

fn bound_check(name: String, b: &ResidualBound, sigmas: f64) -> Check {
    Check {
        name,
        tolerance: format!("|c| <= {}σ per coefficient", sigmas),
        observed: format!("max |c| = {:.6} max σ = {:.6} worst |c|/σ = {:.2}", b.max_abs, b.max_sigma, b.worst_ratio),
        pass: b.worst_ratio <= sigmas,
    }
}

pub fn formality(s: &Settings) -> Result<Vec<Check>> {
    let mut r = rng(s.seed);
    let provider = MonteCarloProvider::new(s.config.clone());
    let u = KontsevichMorphism::new(&provider);
    let dim = s.dim;
    let mut out = Vec::new();
    match s.n {
        1 => {
            let mut bad = 0;
            let cases = 20;
            for i in 0..cases {
                let a = inputs::multivector(&mut r, dim, 1 + i % dim.min(2), 2);
                if formality_residual(&u, &[a])?.is_some_and(|v| !v.is_zero()) {
                    bad += 1;
                }
            }
            out.push(Check::exact("formality n = 1 is the zero operator", bad, cases));
        }
        2 => {
            let orders = [(2, 2), (2, 1), (1, 2), (1, 1)];
            for (ka, kb) in orders {
                if ka.max(kb) > dim {
                    continue;
                }
                let a = inputs::multivector(&mut r, dim, ka, 2);
                let b = inputs::multivector(&mut r, dim, kb, 2);
                let res = formality_residual(&u, &[a, b])?;
                let est = u.estimates()?;
                out.push(bound_check(format!("formality n = 2 orders ({}, {})", ka, kb), &bound_operator(res.as_ref(), &est), 4.0));
            }
        }
        n => bail!("formality is verified for n = 1 and n = 2, got n = {}", n),
    }
    Ok(out)
}

fn monomials(dim: usize, max_degree: u32) -> Vec<Polynomial> {
    let mut out = vec![Polynomial::one(dim)];
    let mut last = out.clone();
    for _ in 0..max_degree {
        let mut next = Vec::new();
        for p in &last {
            for i in 0..dim {
                let q = p * &Polynomial::variable(dim, i);
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

/// `½ θ^{ij} θ^{kl} ∂_i ∂_k f ∂_j ∂_l g` with `θ` read off the order-ħ term.
fn moyal_square<R: Coefficient>(b1: &PolyDiffOperator<R>) -> PolyDiffOperator<R> {
    let dim = b1.dim();
    let mut out = PolyDiffOperator::zero(dim, 2);
    for (o1, c1) in b1.terms() {
        for (o2, c2) in b1.terms() {
            let a: Vec<u32> = o1[0].iter().zip(&o2[0]).map(|(x, y)| x + y).collect();
            let b: Vec<u32> = o1[1].iter().zip(&o2[1]).map(|(x, y)| x + y).collect();
            out.add_term(vec![a, b], (c1 * c2).scale_rational(&rat(1, 2)));
        }
    }
    out
}

pub fn associativity(s: &Settings) -> Result<Vec<Check>> {
    let dim = s.dim;
    let pi = match &s.poisson {
        Some(p) => p.clone(),
        None => {
            if dim < 2 {
                bail!("the default Poisson structure d1^d2 needs dim >= 2");
            }
            MultiVector::term(dim, &[0, 1], Polynomial::one(dim))?
        }
    };
    let provider = MonteCarloProvider::new(s.config.clone());
    let star = star_product(&pi, s.order, &provider)?;
    let mut out = Vec::new();
    let mons = monomials(dim, 2);
    let mut worst = vec![ResidualBound { max_abs: 0.0, max_sigma: 0.0, worst_ratio: 0.0, exact_zero: true }; s.order + 1];
    for f in &mons {
        for g in &mons {
            for h in &mons {
                for (k, c) in star.associator(f, g, h).iter().enumerate() {
                    let b = bound_polynomial(c, &star.estimates);
                    let w = &mut worst[k];
                    w.max_abs = w.max_abs.max(b.max_abs);
                    w.max_sigma = w.max_sigma.max(b.max_sigma);
                    w.worst_ratio = w.worst_ratio.max(b.worst_ratio);
                    w.exact_zero &= b.exact_zero;
                }
            }
        }
    }
    for (k, w) in worst.iter().enumerate() {
        let exact_order = k <= 1 && pi.components().all(|(_, c)| c.total_degree().unwrap_or(0) == 0);
        if exact_order {
            out.push(Check::exact(&format!("associator at ħ^{}", k), usize::from(!w.exact_zero), 1));
        } else {
            out.push(Check {
                name: format!("associator at ħ^{}", k),
                tolerance: "|c| <= 3σ, σ < 0.02".into(),
                observed: format!("max |c| = {:.6} max σ = {:.6} worst |c|/σ = {:.2}", w.max_abs, w.max_sigma, w.worst_ratio),
                pass: w.worst_ratio <= 3.0 && w.max_sigma < 0.02,
            });
        }
    }
    for (k, res) in star.maurer_cartan_residual().iter().enumerate() {
        out.push(bound_check(format!("Maurer–Cartan residual of ⋆ - μ at ħ^{}", k), &bound_operator(Some(res), &star.estimates), 3.0));
    }
    let v = FormalSeries::monomial(MultiVector::zero(dim, 2), pi.clone(), 1, s.order.max(2));
    let tp = maurer_cartan_residual_tpoly(&v)?;
    out.push(Check::exact("Maurer–Cartan residual of ħπ in T_poly", tp.iter().filter(|x| x.as_ref().is_some_and(|x| !x.is_zero())).count(), tp.len()));
    if s.order >= 2 && pi.components().all(|(_, c)| c.total_degree().unwrap_or(0) == 0) {
        let series = &star.series;
        let diff = series.coefficient(2).sub(&moyal_square(series.coefficient(1)));
        out.push(bound_check("ħ² term against the exponential of the ħ term".into(), &bound_operator(Some(&diff), &star.estimates), 3.0));
    }
    Ok(out)
}
