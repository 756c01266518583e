//! Shared generators and independent oracles for the integration tests.
#![allow(dead_code)]

use formality::scalar::{rat_int, Rational};
use formality::{MultiVector, PolyDiffOperator, Polynomial};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn poly(r: &mut ChaCha8Rng, dim: usize, max_degree: u32) -> Polynomial {
    let mut p = Polynomial::zero(dim);
    for _ in 0..r.gen_range(1..=3) {
        let mut e = vec![0u32; dim];
        for _ in 0..r.gen_range(0..=max_degree) {
            e[r.gen_range(0..dim)] += 1;
        }
        p.add_term(e, rat_int(r.gen_range(-4..=4)));
    }
    p
}

pub fn multivector(r: &mut ChaCha8Rng, dim: usize, order: usize, max_degree: u32) -> MultiVector {
    let mut out = MultiVector::zero(dim, order);
    let all: Vec<usize> = (0..dim).collect();
    for _ in 0..r.gen_range(1..=3) {
        let idx: Vec<usize> = all.choose_multiple(r, order).copied().collect();
        let f = poly(r, dim, max_degree);
        out.add_term(&idx, f);
    }
    out
}

pub fn operator(r: &mut ChaCha8Rng, dim: usize, arity: usize, max_order: u32) -> PolyDiffOperator {
    let mut out = PolyDiffOperator::zero(dim, arity);
    for _ in 0..r.gen_range(1..=3) {
        let orders = (0..arity)
            .map(|_| {
                let mut o = vec![0u32; dim];
                for _ in 0..r.gen_range(0..=max_order) {
                    o[r.gen_range(0..dim)] += 1;
                }
                o
            })
            .collect();
        let c = poly(r, dim, 1);
        out.add_term(orders, c);
    }
    out
}

pub fn x(dim: usize, i: usize) -> Polynomial {
    Polynomial::variable(dim, i)
}

pub type VectorField = Vec<Polynomial>;

fn apply_field(v: &VectorField, g: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero(g.dim());
    for (i, c) in v.iter().enumerate() {
        out = &out + &(c * &g.derivative(i));
    }
    out
}

fn lie(v: &VectorField, w: &VectorField) -> VectorField {
    (0..v.len()).map(|k| &apply_field(v, &w[k]) - &apply_field(w, &v[k])).collect()
}

fn as_multivector(v: &VectorField) -> MultiVector {
    let dim = v.len();
    let mut out = MultiVector::zero(dim, 1);
    for (i, c) in v.iter().enumerate() {
        out.add_term(&[i], c.clone());
    }
    out
}

fn wedge_all(dim: usize, fields: &[VectorField]) -> MultiVector {
    let mut acc = MultiVector::function(Polynomial::one(dim));
    for v in fields {
        acc = acc.wedge(&as_multivector(v));
    }
    acc
}

/// Decomposes `c ∂_{i1} ∧ .. ∧ ∂_{ik}` into `(c ∂_{i1}, ∂_{i2}, ..)`, or the
/// bare function `c` when `k = 0`.
fn decomposables(a: &MultiVector) -> Vec<(Polynomial, Vec<VectorField>)> {
    let dim = a.dim();
    let mut out = Vec::new();
    for (idx, c) in a.components() {
        let fields = idx
            .iter()
            .enumerate()
            .map(|(pos, &i)| {
                let mut v = vec![Polynomial::zero(dim); dim];
                v[i] = if pos == 0 { c.clone() } else { Polynomial::one(dim) };
                v
            })
            .collect();
        out.push((c.clone(), fields));
    }
    out
}

fn sign(k: usize) -> Rational {
    rat_int(if k % 2 == 0 { 1 } else { -1 })
}

/// `[X1 ∧ .. ∧ Xp, g] = Σ_i (-1)^{p-i} X_i(g) X1 ∧ .. X̂i .. ∧ Xp`.
fn bracket_with_function(fields: &[VectorField], g: &Polynomial, dim: usize) -> MultiVector {
    let p = fields.len();
    let mut out = MultiVector::zero(dim, p - 1);
    for i in 0..p {
        let rest: Vec<VectorField> = fields.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v.clone()).collect();
        let term = wedge_all(dim, &rest).multiply_function(&apply_field(&fields[i], g)).scale(&sign(p - 1 - i));
        out = out.add(&term);
    }
    out
}

/// Schouten bracket from the defining double sum over decomposables:
/// `Σ (-1)^{i+j} [Xi, Yj] ∧ X1 .. X̂i .. ∧ Xp ∧ Y1 .. Ŷj .. ∧ Yq`, extended to
/// functions by `[P, g]` above and graded antisymmetry.
pub fn schouten_oracle(a: &MultiVector, b: &MultiVector) -> MultiVector {
    let dim = a.dim();
    let (p, q) = (a.order(), b.order());
    if p == 0 && q == 0 {
        return MultiVector::zero(dim, 0);
    }
    if p == 0 {
        let s = sign(((p as i64 - 1) * (q as i64 - 1)).rem_euclid(2) as usize + 1);
        return schouten_oracle(b, a).scale(&s);
    }
    let mut out = MultiVector::zero(dim, p + q - 1);
    for (_, xs) in decomposables(a) {
        if q == 0 {
            for (g, _) in decomposables(b) {
                out = out.add(&bracket_with_function(&xs, &g, dim));
            }
            continue;
        }
        for (_, ys) in decomposables(b) {
            for i in 0..p {
                for j in 0..q {
                    let mut fields = vec![lie(&xs[i], &ys[j])];
                    fields.extend(xs.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, v)| v.clone()));
                    fields.extend(ys.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| v.clone()));
                    out = out.add(&wedge_all(dim, &fields).scale(&sign(i + j)));
                }
            }
        }
    }
    out
}

/// Pointwise Hochschild differential of `a` on concrete arguments.
pub fn hochschild_on(a: &PolyDiffOperator, fs: &[Polynomial]) -> Polynomial {
    let m = a.arity();
    assert_eq!(fs.len(), m + 1);
    let mut out = &fs[0] * &a.apply(&fs[1..]);
    for i in 0..m {
        let mut args: Vec<Polynomial> = fs[..i].to_vec();
        args.push(&fs[i] * &fs[i + 1]);
        args.extend_from_slice(&fs[i + 2..]);
        let t = a.apply(&args);
        out = if (i + 1) % 2 == 0 { &out + &t } else { &out - &t };
    }
    let last = &a.apply(&fs[..m]) * &fs[m];
    if (m + 1) % 2 == 0 {
        &out + &last
    } else {
        &out - &last
    }
}

/// Pointwise Gerstenhaber composition `Σ_j (-1)^{(m2-1)j} a(.., b(f_j, ..), ..)`
/// with 0-based `j`.
pub fn circ_on(a: &PolyDiffOperator, b: &PolyDiffOperator, fs: &[Polynomial]) -> Polynomial {
    let (m1, m2) = (a.arity(), b.arity());
    let mut out = Polynomial::zero(fs.first().map_or(a.dim(), |f| f.dim()));
    if m1 == 0 {
        return out;
    }
    for j in 0..m1 {
        let mut args: Vec<Polynomial> = fs[..j].to_vec();
        args.push(b.apply(&fs[j..j + m2]));
        args.extend_from_slice(&fs[j + m2..]);
        let t = a.apply(&args);
        out = if ((m2 as i64 - 1) * j as i64).rem_euclid(2) == 0 { &out + &t } else { &out - &t };
    }
    out
}

/// Double-exponential quadrature of `f` over `(0, 1)`.
pub fn tanh_sinh(f: impl Fn(f64) -> f64, level: u32) -> f64 {
    let h = 2f64.powi(-(level as i32));
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut sum = 0.0;
    let kmax = (6.0 / h) as i64;
    for k in -kmax..=kmax {
        let t = k as f64 * h;
        let u = half_pi * t.sinh();
        let x = 0.5 * (1.0 + u.tanh());
        let w = 0.5 * half_pi * t.cosh() / u.cosh().powi(2);
        if x <= 0.0 || x >= 1.0 || w < 1e-300 {
            continue;
        }
        sum += w * f(x);
    }
    sum * h
}

/// `dΦ/da, dΦ/db` for `Φ = Arg((q - p)/(q - p̄))` with `p = a + ib` and `q` real.
pub fn ground_angle_gradient(a: f64, b: f64, q: f64) -> (f64, f64) {
    let (dx, dy) = (q - a, b);
    let r2 = dx * dx + dy * dy;
    (-2.0 * dy / r2, -2.0 * dx / r2)
}
