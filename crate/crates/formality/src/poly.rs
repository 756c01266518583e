//! Sparse multivariate polynomials in `x1..xd`.

use crate::scalar::{Coefficient, Rational};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Exponents = Vec<u32>;

#[derive(Clone, PartialEq, Debug)]
pub struct Polynomial<R: Coefficient = Rational> {
    dim: usize,
    terms: BTreeMap<Exponents, R>,
}

impl<R: Coefficient> Polynomial<R> {
    pub fn zero(dim: usize) -> Self {
        Polynomial { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: R) -> Self {
        Self::monomial(vec![0; dim], c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, R::one())
    }

    pub fn monomial(exponents: Exponents, c: R) -> Self {
        let mut p = Polynomial::zero(exponents.len());
        p.add_term(exponents, c);
        p
    }

    /// The coordinate function `x_{i+1}`.
    pub fn variable(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::monomial(e, R::one())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &R)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> R {
        self.terms.get(exponents).cloned().unwrap_or_else(R::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add_term(&mut self, exponents: Exponents, c: R) {
        assert_eq!(exponents.len(), self.dim, "exponent vector length");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exponents) {
            Some(v) => {
                *v = v.plus(&c);
                if v.is_zero() {
                    self.terms.remove(&exponents);
                }
            }
            None => {
                self.terms.insert(exponents, c);
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        assert_eq!(self.dim, other.dim, "polynomial dimension");
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Polynomial::zero(self.dim);
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v.times(c));
        }
        out
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&R::from_rational(q))
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Polynomial::zero(self.dim);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c.times(&R::from_int(e[i] as i64)));
            }
        }
        out
    }

    /// `∂^orders` with `orders` a multi-index.
    pub fn derivative_multi(&self, orders: &[u32]) -> Self {
        let mut out = Polynomial::zero(self.dim);
        'terms: for (e, c) in &self.terms {
            let mut f = e.clone();
            let mut factor: i64 = 1;
            for (k, &o) in orders.iter().enumerate() {
                if o > e[k] {
                    continue 'terms;
                }
                for t in 0..o {
                    factor *= (e[k] - t) as i64;
                }
                f[k] -= o;
            }
            out.add_term(f, c.times(&R::from_int(factor)));
        }
        out
    }

    pub fn map_coefficients<S: Coefficient>(&self, f: impl Fn(&R) -> S) -> Polynomial<S> {
        let mut out = Polynomial::zero(self.dim);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn eval_with(&self, point: &[f64], to_f64: impl Fn(&R) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(point).fold(to_f64(c), |acc, (&k, &x)| acc * x.powi(k as i32)))
            .sum()
    }
}

impl Polynomial<Rational> {
    pub fn lift<S: Coefficient>(&self) -> Polynomial<S> {
        self.map_coefficients(S::from_rational)
    }
}

impl<R: Coefficient> Add for &Polynomial<R> {
    type Output = Polynomial<R>;
    fn add(self, rhs: Self) -> Polynomial<R> {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl<R: Coefficient> Sub for &Polynomial<R> {
    type Output = Polynomial<R>;
    fn sub(self, rhs: Self) -> Polynomial<R> {
        self + &(-rhs)
    }
}

impl<R: Coefficient> Neg for &Polynomial<R> {
    type Output = Polynomial<R>;
    fn neg(self) -> Polynomial<R> {
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.negated())).collect(),
        }
    }
}

impl<R: Coefficient> Mul for &Polynomial<R> {
    type Output = Polynomial<R>;
    fn mul(self, rhs: Self) -> Polynomial<R> {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension");
        let mut out = Polynomial::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.times(cb));
            }
        }
        out
    }
}

/// Writes a monomial as `x^e1,e2,...`.
pub fn format_exponents(e: &[u32]) -> String {
    let parts: Vec<String> = e.iter().map(|k| k.to_string()).collect();
    format!("x^{}", parts.join(","))
}

impl<R: Coefficient> fmt::Display for Polynomial<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(e, c)| format!("({}) * {}", c, format_exponents(e))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
