//! Polydifferential operators with polynomial coefficients on `R^d`.
//!
//! An operator of arity `m` is a finite sum of terms
//! `c(x) ∂^{o1} f1 ⋯ ∂^{om} fm`, stored as a map from the tuple of
//! derivative multi-indices to its coefficient polynomial. It has degree
//! `m - 1` in `D_poly` and `m - 2` after the shift.
//!
//! Arity 0 operators are functions. Composing two functions has no slots to
//! fill and yields the zero operator of arity 0.
//!
//! # Panics
//! Binary operations panic on operands over different dimensions.

use crate::graded::Sign;
use crate::poly::Polynomial;
use crate::scalar::{Coefficient, Rational};
use std::collections::BTreeMap;

pub type Orders = Vec<Vec<u32>>;

#[derive(Clone, PartialEq, Debug)]
pub struct PolyDiffOperator<R: Coefficient = Rational> {
    dim: usize,
    arity: usize,
    terms: BTreeMap<Orders, Polynomial<R>>,
}


fn factorial(n: u32) -> i64 {
    (1..=n as i64).product()
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Splits of a multi-index into `parts` multi-indices with their multinomial
/// weights, as in `∂^a (g0 g1 ⋯) = Σ a!/(a0! a1! ⋯) ∂^{a0} g0 ∂^{a1} g1 ⋯`.
pub fn leibniz_splits(a: &[u32], parts: usize) -> Vec<(Vec<Vec<u32>>, i64)> {
    let mut acc: Vec<(Vec<Vec<u32>>, i64)> = vec![(vec![Vec::new(); parts], 1)];
    for &ai in a {
        let mut next = Vec::new();
        for (split, w) in &acc {
            for comp in compositions(ai, parts) {
                let mult = factorial(ai) / comp.iter().map(|&c| factorial(c)).product::<i64>();
                let mut s = split.clone();
                for (p, &c) in comp.iter().enumerate() {
                    s[p].push(c);
                }
                next.push((s, w * mult));
            }
        }
        acc = next;
    }
    acc
}

impl<R: Coefficient> PolyDiffOperator<R> {
    pub fn zero(dim: usize, arity: usize) -> Self {
        PolyDiffOperator { dim, arity, terms: BTreeMap::new() }
    }

    /// `c(x) ∂^{o1} f1 ⋯ ∂^{om} fm`.
    pub fn term(coefficient: Polynomial<R>, orders: Orders) -> Self {
        let mut op = PolyDiffOperator::zero(coefficient.dim(), orders.len());
        op.add_term(orders, coefficient);
        op
    }

    /// Function viewed as an arity 0 operator.
    pub fn function(f: Polynomial<R>) -> Self {
        Self::term(f, Vec::new())
    }

    /// Pointwise product `μ(f, g) = f g`.
    pub fn multiplication(dim: usize) -> Self {
        Self::term(Polynomial::one(dim), vec![vec![0; dim], vec![0; dim]])
    }

    pub fn identity(dim: usize) -> Self {
        Self::term(Polynomial::one(dim), vec![vec![0; dim]])
    }

    pub fn add_term(&mut self, orders: Orders, c: Polynomial<R>) {
        assert_eq!(orders.len(), self.arity, "operator arity");
        assert_eq!(c.dim(), self.dim, "operator dimension");
        debug_assert!(orders.iter().all(|o| o.len() == self.dim));
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&orders) {
            Some(v) => {
                v.add_assign_ref(&c);
                if v.is_zero() {
                    self.terms.remove(&orders);
                }
            }
            None => {
                self.terms.insert(orders, c);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i64 {
        self.arity as i64 - 1
    }

    pub fn shifted_degree(&self) -> i64 {
        self.arity as i64 - 2
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Orders, &Polynomial<R>)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, orders: &[Vec<u32>]) -> Polynomial<R> {
        self.terms.get(orders).cloned().unwrap_or_else(|| Polynomial::zero(self.dim))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "operator dimension");
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        assert_eq!(self.arity, other.arity, "operator arity");
        let mut out = self.clone();
        for (o, c) in &other.terms {
            out.add_term(o.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coefficient_polys(|c| -c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &R) -> Self {
        self.map_coefficient_polys(|c| c.scale(r))
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&R::from_rational(q))
    }

    pub fn scale_sign(&self, s: Sign) -> Self {
        if s.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    fn map_coefficient_polys(&self, f: impl Fn(&Polynomial<R>) -> Polynomial<R>) -> Self {
        let mut out = PolyDiffOperator::zero(self.dim, self.arity);
        for (o, c) in &self.terms {
            out.add_term(o.clone(), f(c));
        }
        out
    }

    pub fn map_coefficients<S: Coefficient>(&self, f: impl Fn(&R) -> S) -> PolyDiffOperator<S> {
        let mut out = PolyDiffOperator::zero(self.dim, self.arity);
        for (o, c) in &self.terms {
            out.add_term(o.clone(), c.map_coefficients(&f));
        }
        out
    }

    /// Evaluates on polynomial arguments.
    pub fn apply(&self, args: &[Polynomial<R>]) -> Polynomial<R> {
        assert_eq!(args.len(), self.arity, "operator arity");
        let mut out = Polynomial::zero(self.dim);
        for (o, c) in &self.terms {
            let mut t = c.clone();
            for (f, oj) in args.iter().zip(o) {
                t = &t * &f.derivative_multi(oj);
                if t.is_zero() {
                    break;
                }
            }
            out.add_assign_ref(&t);
        }
        out
    }

    /// `A1(f1, .., f_{j-1}, A2(fj, ..), ..)` with the inner operator in slot `j`
    /// (0-based), computed with the Leibniz rule.
    pub fn insert(&self, slot: usize, inner: &Self) -> Self {
        assert_eq!(self.dim, inner.dim, "operator dimension");
        assert!(slot < self.arity);
        let m2 = inner.arity;
        let mut out = PolyDiffOperator::zero(self.dim, self.arity + m2 - 1);
        for (o1, c1) in &self.terms {
            let splits = leibniz_splits(&o1[slot], m2 + 1);
            for (o2, c2) in &inner.terms {
                for (split, mult) in &splits {
                    let dc2 = c2.derivative_multi(&split[0]);
                    if dc2.is_zero() {
                        continue;
                    }
                    let coeff = (c1 * &dc2).scale(&R::from_int(*mult));
                    let mut orders: Orders = o1[..slot].to_vec();
                    for k in 0..m2 {
                        orders.push(o2[k].iter().zip(&split[k + 1]).map(|(a, b)| a + b).collect());
                    }
                    orders.extend_from_slice(&o1[slot + 1..]);
                    out.add_term(orders, coeff);
                }
            }
        }
        out
    }

    /// Gerstenhaber composition
    /// `A1 ∘ A2 = Σ_j (-1)^{(m2-1)(j-1)} A1(.., A2(fj, .., f_{j+m2-1}), ..)`.
    pub fn circ(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "operator dimension");
        let arity = (self.arity + other.arity).saturating_sub(1);
        let mut out = PolyDiffOperator::zero(self.dim, arity);
        for j in 0..self.arity {
            let s = Sign::pow((other.arity as i64 - 1) * j as i64);
            out = out.add(&self.insert(j, other).scale_sign(s));
        }
        out
    }

    /// `[A1, A2]_G = A1 ∘ A2 - (-1)^{|A1||A2|} A2 ∘ A1`.
    pub fn gerstenhaber(&self, other: &Self) -> Self {
        let s = Sign::pow(self.degree() * other.degree());
        self.circ(other).sub(&other.circ(self).scale_sign(s))
    }

    /// `dA = -[μ, A]_G`.
    pub fn coboundary(&self) -> Self {
        PolyDiffOperator::multiplication(self.dim).gerstenhaber(self).neg()
    }

    /// Hochschild differential
    /// `f1 A(f2, ..) + Σ_i (-1)^i A(.., fi f_{i+1}, ..) + (-1)^{m+1} A(.., fm) f_{m+1}`.
    pub fn hochschild(&self) -> Self {
        let m = self.arity;
        let zero = vec![0u32; self.dim];
        let mut out = PolyDiffOperator::zero(self.dim, m + 1);
        for (o, c) in &self.terms {
            let mut first = vec![zero.clone()];
            first.extend(o.iter().cloned());
            out.add_term(first, c.clone());
            for i in 0..m {
                let s = Sign::pow(i as i64 + 1);
                for (split, mult) in leibniz_splits(&o[i], 2) {
                    let mut orders: Orders = o[..i].to_vec();
                    orders.push(split[0].clone());
                    orders.push(split[1].clone());
                    orders.extend_from_slice(&o[i + 1..]);
                    let k = if s.is_negative() { -mult } else { mult };
                    out.add_term(orders, c.scale(&R::from_int(k)));
                }
            }
            let mut last = o.clone();
            last.push(zero.clone());
            let c_last = if m % 2 == 0 { -c } else { c.clone() };
            out.add_term(last, c_last);
        }
        out
    }
}

impl PolyDiffOperator<Rational> {
    pub fn lift<S: Coefficient>(&self) -> PolyDiffOperator<S> {
        self.map_coefficients(S::from_rational)
    }
}

/// Unary Taylor coefficient on `D_poly[1]`: `Q'_1(A) = -d_H A`.
pub fn q1<R: Coefficient>(a: &PolyDiffOperator<R>) -> PolyDiffOperator<R> {
    a.hochschild().neg()
}

/// `Q'_1(A)` as `[A, μ]_G`.
pub fn q1_via_bracket<R: Coefficient>(a: &PolyDiffOperator<R>) -> PolyDiffOperator<R> {
    a.gerstenhaber(&PolyDiffOperator::multiplication(a.dim()))
}

/// Binary Taylor coefficient `Q'_2(A1.A2) = (-1)^{|A1|(|A2|-1)} [A1, A2]_G`.
pub fn q2<R: Coefficient>(a: &PolyDiffOperator<R>, b: &PolyDiffOperator<R>) -> PolyDiffOperator<R> {
    a.gerstenhaber(b).scale_sign(Sign::pow(a.degree() * (b.degree() - 1)))
}
