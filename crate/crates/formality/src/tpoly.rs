//! Polyvector fields with polynomial coefficients on `R^d`.
//!
//! A `k`-vector is stored as its coefficients on the basis
//! `∂_{i1} ∧ ... ∧ ∂_{ik}` with `i1 < ... < ik`. Index sums in the formulas
//! below run over all index tuples with fully antisymmetric components, so the
//! component on a tuple is `sign · c / k!` where `c` is the stored coefficient
//! of the sorted tuple. Indices are 0-based internally.
//!
//! Degree conventions: a `k`-vector has degree `k - 1`, and degree `k - 2`
//! after the shift to `g[1]`.
//!
//! # Panics
//! Binary operations panic when the operands live on different `R^d`; use
//! [`MultiVector::check_same_dim`] at input boundaries.

use crate::error::{Error, Result};
use crate::graded::Sign;
use crate::poly::Polynomial;
use crate::scalar::{rat_int, Coefficient, Rational};
use std::collections::BTreeMap;

#[derive(Clone, PartialEq, Debug)]
pub struct MultiVector {
    dim: usize,
    order: usize,
    components: BTreeMap<Vec<usize>, Polynomial>,
}

/// Sorts indices, returning the signature of the sorting permutation, or
/// `None` when an index repeats.
pub fn sort_with_sign(indices: &[usize]) -> Option<(Sign, Vec<usize>)> {
    let mut v = indices.to_vec();
    let mut sign = Sign::PLUS;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((sign, v))
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

fn signed(p: Polynomial, s: Sign) -> Polynomial {
    if s.is_negative() {
        -&p
    } else {
        p
    }
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

impl MultiVector {
    pub fn zero(dim: usize, order: usize) -> Self {
        MultiVector { dim, order, components: BTreeMap::new() }
    }

    pub fn function(f: Polynomial) -> Self {
        let mut m = MultiVector::zero(f.dim(), 0);
        m.add_term(&[], f);
        m
    }

    /// `f ∂_{i1} ∧ ... ∧ ∂_{ik}` for indices in any order.
    pub fn term(dim: usize, indices: &[usize], f: Polynomial) -> Result<Self> {
        if f.dim() != dim {
            return Err(Error::DimensionMismatch(f.dim(), dim));
        }
        if let Some(&i) = indices.iter().find(|&&i| i >= dim) {
            return Err(Error::IndexOutOfRange { index: i, dim });
        }
        let mut m = MultiVector::zero(dim, indices.len());
        m.add_term(indices, f);
        Ok(m)
    }

    /// Adds `f ∂_{indices}`; repeated indices contribute nothing.
    pub fn add_term(&mut self, indices: &[usize], f: Polynomial) {
        assert_eq!(indices.len(), self.order, "multivector order");
        assert_eq!(f.dim(), self.dim, "multivector dimension");
        if f.is_zero() {
            return;
        }
        if let Some((s, key)) = sort_with_sign(indices) {
            let f = if s.is_negative() { -&f } else { f };
            let entry = self.components.entry(key.clone()).or_insert_with(|| Polynomial::zero(self.dim));
            entry.add_assign_ref(&f);
            if entry.is_zero() {
                self.components.remove(&key);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Degree in `T_poly`.
    pub fn degree(&self) -> i64 {
        self.order as i64 - 1
    }

    /// Degree in `T_poly[1]`.
    pub fn shifted_degree(&self) -> i64 {
        self.order as i64 - 2
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Polynomial)> {
        self.components.iter()
    }

    pub fn coefficient(&self, sorted: &[usize]) -> Polynomial {
        self.components.get(sorted).cloned().unwrap_or_else(|| Polynomial::zero(self.dim))
    }

    /// Antisymmetric component on an arbitrary index tuple: the stored
    /// coefficient of the sorted tuple times the sorting sign, so that
    /// `α = 1/k! Σ α^{i1..ik} ∂_{i1} ∧ .. ∧ ∂_{ik}` over all tuples.
    pub fn component(&self, indices: &[usize]) -> Polynomial {
        match sort_with_sign(indices) {
            None => Polynomial::zero(self.dim),
            Some((s, key)) => signed(self.coefficient(&key), s),
        }
    }

    /// Every index tuple with a nonzero antisymmetric component.
    pub fn full_components(&self) -> Vec<(Vec<usize>, Polynomial)> {
        let perms = permutations(self.order);
        let mut out = Vec::new();
        for key in self.components.keys() {
            for p in &perms {
                let tuple: Vec<usize> = p.iter().map(|&i| key[i]).collect();
                out.push((tuple.clone(), self.component(&tuple)));
            }
        }
        out
    }

    pub fn check_same_dim(&self, other: &MultiVector) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiVector) -> MultiVector {
        assert_eq!(self.dim, other.dim, "multivector dimension");
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        assert_eq!(self.order, other.order, "multivector order");
        let mut out = self.clone();
        for (k, f) in &other.components {
            out.add_term(k, f.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiVector) -> MultiVector {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiVector {
        self.scale(&rat_int(-1))
    }

    pub fn scale(&self, q: &Rational) -> MultiVector {
        let mut out = MultiVector::zero(self.dim, self.order);
        for (k, f) in &self.components {
            out.add_term(k, f.scale_rational(q));
        }
        out
    }

    pub fn scale_sign(&self, s: Sign) -> MultiVector {
        if s.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn multiply_function(&self, f: &Polynomial) -> MultiVector {
        let mut out = MultiVector::zero(self.dim, self.order);
        for (k, g) in &self.components {
            out.add_term(k, f * g);
        }
        out
    }

    pub fn wedge(&self, other: &MultiVector) -> MultiVector {
        assert_eq!(self.dim, other.dim, "multivector dimension");
        let mut out = MultiVector::zero(self.dim, self.order + other.order);
        for (i, f) in &self.components {
            for (j, g) in &other.components {
                let idx: Vec<usize> = i.iter().chain(j).copied().collect();
                out.add_term(&idx, f * g);
            }
        }
        out
    }

    /// `α1 • α2 = Σ_l (-1)^{l-1} α1^{i1..ik1} ∂_{il} α2^{j1..jk2}
    /// ∂_{i1} ∧ .. ∂̂_{il} .. ∧ ∂_{ik1} ∧ ∂_{j1} ∧ .. ∧ ∂_{jk2}`,
    /// summed over all index tuples with the `1/k1! k2!` of both expansions.
    /// Zero when `α1` is a function.
    pub fn bullet(&self, other: &MultiVector) -> MultiVector {
        assert_eq!(self.dim, other.dim, "multivector dimension");
        let k1 = self.order;
        let k2 = other.order;
        if k1 == 0 {
            return MultiVector::zero(self.dim, k2.saturating_sub(1));
        }
        let mut out = MultiVector::zero(self.dim, k1 + k2 - 1);
        let norm = Rational::new(1.into(), (factorial(k1) * factorial(k2)).into());
        let left = self.full_components();
        let right = other.full_components();
        for (itup, a) in &left {
            for l in 0..k1 {
                let sign = Sign::pow(l as i64);
                let rest: Vec<usize> =
                    itup.iter().enumerate().filter(|&(p, _)| p != l).map(|(_, &i)| i).collect();
                for (jtup, b) in &right {
                    let db = b.derivative(itup[l]);
                    if db.is_zero() {
                        continue;
                    }
                    let f = signed((a * &db).scale_rational(&norm), sign);
                    let idx: Vec<usize> = rest.iter().chain(jtup).copied().collect();
                    out.add_term(&idx, f);
                }
            }
        }
        out
    }

    /// Schouten bracket `[α1, α2]_S = (-1)^{k1-1} α1•α2 - (-1)^{k1(k2-1)} α2•α1`.
    pub fn schouten(&self, other: &MultiVector) -> MultiVector {
        let k1 = self.order as i64;
        let k2 = other.order as i64;
        let a = self.bullet(other).scale_sign(Sign::pow(k1 - 1));
        let b = other.bullet(self).scale_sign(Sign::pow(k1 * (k2 - 1)));
        a.sub_any(&b)
    }

    /// Reversed bracket `[α1, α2]'_S = -[α2, α1]_S`, a graded Lie bracket for
    /// the `T_poly` grading.
    pub fn bracket_prime(&self, other: &MultiVector) -> MultiVector {
        other.schouten(self).neg()
    }

    /// `[α1, α2]'_S` as `(-1)^{(k1-1)k2} α1•α2 + (-1)^{k2} α2•α1`.
    pub fn bracket_prime_via_bullet(&self, other: &MultiVector) -> MultiVector {
        let k1 = self.order as i64;
        let k2 = other.order as i64;
        let a = self.bullet(other).scale_sign(Sign::pow((k1 - 1) * k2));
        let b = other.bullet(self).scale_sign(Sign::pow(k2));
        a.add_any(&b)
    }

    /// Zero results of mismatched nominal order are absorbed.
    fn add_any(&self, other: &MultiVector) -> MultiVector {
        if self.is_zero() {
            other.clone()
        } else if other.is_zero() {
            self.clone()
        } else {
            self.add(other)
        }
    }

    fn sub_any(&self, other: &MultiVector) -> MultiVector {
        self.add_any(&other.neg())
    }

    pub fn lift_coefficients<S: Coefficient>(&self) -> Vec<(Vec<usize>, Polynomial<S>)> {
        self.components.iter().map(|(k, f)| (k.clone(), f.lift())).collect()
    }
}

/// Binary Taylor coefficient of the Schouten L∞ structure on `T_poly[1]`:
/// `α1•α2 + (-1)^{k1 k2} α2•α1`, equal to `(-1)^{(k1-1)k2} [α1, α2]'_S`.
pub fn q2(a: &MultiVector, b: &MultiVector) -> MultiVector {
    let k1 = a.order() as i64;
    let k2 = b.order() as i64;
    a.bullet(b).add_any(&b.bullet(a).scale_sign(Sign::pow(k1 * k2)))
}

/// The same coefficient through the bracket: `(-1)^{(k1-1)k2} [α1, α2]'_S`.
pub fn q2_via_bracket(a: &MultiVector, b: &MultiVector) -> MultiVector {
    let k1 = a.order() as i64;
    let k2 = b.order() as i64;
    a.bracket_prime(b).scale_sign(Sign::pow((k1 - 1) * k2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn x(d: usize, i: usize) -> Polynomial {
        Polynomial::variable(d, i)
    }

    fn one(d: usize) -> Polynomial {
        Polynomial::one(d)
    }

    #[test]
    fn vector_field_on_function() {
        let xi = MultiVector::term(2, &[0], x(2, 1)).unwrap();
        let f = MultiVector::function(&x(2, 0) * &x(2, 0));
        let expect = MultiVector::function((&x(2, 0) * &x(2, 1)).scale_rational(&rat(2, 1)));
        assert_eq!(xi.schouten(&f), expect);
    }

    #[test]
    fn commuting_coordinate_fields() {
        let a = MultiVector::term(2, &[0], one(2)).unwrap();
        let b = MultiVector::term(2, &[1], one(2)).unwrap();
        assert!(a.schouten(&b).is_zero());
    }

    #[test]
    fn wedge_sign_and_repeat() {
        let a = MultiVector::term(3, &[2], one(3)).unwrap();
        let b = MultiVector::term(3, &[0], one(3)).unwrap();
        let w = a.wedge(&b);
        assert_eq!(w.coefficient(&[0, 2]), -&one(3));
        assert!(a.wedge(&a).is_zero());
    }

    #[test]
    fn antisymmetric_components() {
        let p = MultiVector::term(2, &[0, 1], one(2)).unwrap();
        assert_eq!(p.component(&[0, 1]), one(2));
        assert_eq!(p.component(&[1, 0]), -&one(2));
        assert!(p.component(&[0, 0]).is_zero());
    }

    #[test]
    fn bullet_matches_contraction_form() {
        // Σ_{i ∈ I} c1 ∂_i c2 ι_i(∂_I) ∧ ∂_J, using sorted tuples only.
        let a = MultiVector::term(3, &[0, 2], &x(3, 1) * &x(3, 2)).unwrap()
            .add(&MultiVector::term(3, &[1, 2], x(3, 0)).unwrap());
        let b = MultiVector::term(3, &[0, 1], &x(3, 2) * &x(3, 2)).unwrap()
            .add(&MultiVector::term(3, &[1, 2], &x(3, 0) * &x(3, 1)).unwrap());
        let mut expect = MultiVector::zero(3, 3);
        for (i, c1) in a.components() {
            for (j, c2) in b.components() {
                for (p, &ip) in i.iter().enumerate() {
                    let mut f = c1 * &c2.derivative(ip);
                    if p % 2 == 1 {
                        f = -&f;
                    }
                    let idx: Vec<usize> = i.iter().filter(|&&t| t != ip).chain(j).copied().collect();
                    expect.add_term(&idx, f);
                }
            }
        }
        assert_eq!(a.bullet(&b), expect);
    }

    #[test]
    fn linear_bivector_self_pairing() {
        let pi = MultiVector::term(2, &[0, 1], x(2, 0)).unwrap();
        assert_eq!(q2(&pi, &pi), pi.bullet(&pi).scale(&rat(2, 1)));
        assert!(q2(&pi, &pi).is_zero());
    }

    #[test]
    fn bracket_paths_agree() {
        let a = MultiVector::term(2, &[0], &x(2, 0) * &x(2, 1)).unwrap();
        let b = MultiVector::term(2, &[0, 1], x(2, 1)).unwrap();
        assert_eq!(a.bracket_prime(&b), a.bracket_prime_via_bullet(&b));
        assert_eq!(q2(&a, &b), q2_via_bracket(&a, &b));
    }

    #[test]
    fn out_of_range_index() {
        assert!(MultiVector::term(2, &[2], one(2)).is_err());
    }
}
