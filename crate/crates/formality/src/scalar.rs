//! Coefficient rings used by polynomials and operators.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// A commutative ring containing the rationals.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn from_rational(q: &Rational) -> Self;

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }
    fn from_int(n: i64) -> Self {
        Self::from_rational(&rat_int(n))
    }
    fn scaled(&self, q: &Rational) -> Self {
        self.times(&Self::from_rational(q))
    }
}

impl Coefficient for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

impl Coefficient for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn from_rational(q: &Rational) -> Self {
        rat_to_f64(q)
    }
}

/// Identifier of a graph weight appearing as a formal symbol.
pub type WeightSymbol = u64;

/// Polynomial with rational coefficients in formal weight symbols.
///
/// Operators assembled from graph sums carry their weights symbolically; the
/// numbers are substituted only when a residual is evaluated.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct WeightExpr {
    terms: BTreeMap<Vec<(WeightSymbol, u32)>, Rational>,
}

fn mul_monomials(a: &[(WeightSymbol, u32)], b: &[(WeightSymbol, u32)]) -> Vec<(WeightSymbol, u32)> {
    let mut m: BTreeMap<WeightSymbol, u32> = a.iter().copied().collect();
    for &(s, e) in b {
        *m.entry(s).or_insert(0) += e;
    }
    m.into_iter().collect()
}

impl WeightExpr {
    pub fn symbol(s: WeightSymbol) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![(s, 1)], rat_int(1));
        WeightExpr { terms }
    }

    pub fn constant(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !Zero::is_zero(&q) {
            terms.insert(Vec::new(), q);
        }
        WeightExpr { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<(WeightSymbol, u32)>, &Rational)> {
        self.terms.iter()
    }

    pub fn symbols(&self) -> BTreeSet<WeightSymbol> {
        self.terms.keys().flat_map(|m| m.iter().map(|&(s, _)| s)).collect()
    }

    /// Exact value when no weight symbols remain.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(rat_int(0)),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn eval(&self, values: &HashMap<WeightSymbol, f64>) -> f64 {
        self.terms
            .iter()
            .map(|(mono, c)| {
                mono.iter().fold(rat_to_f64(c), |acc, &(s, e)| {
                    acc * values.get(&s).copied().unwrap_or(f64::NAN).powi(e as i32)
                })
            })
            .sum()
    }

    pub fn partial(&self, s: WeightSymbol) -> WeightExpr {
        let mut out = WeightExpr::default();
        for (mono, c) in &self.terms {
            if let Some(pos) = mono.iter().position(|&(t, _)| t == s) {
                let e = mono[pos].1;
                let mut m = mono.clone();
                if e == 1 {
                    m.remove(pos);
                } else {
                    m[pos].1 = e - 1;
                }
                out.add_term(m, c * rat_int(e as i64));
            }
        }
        out
    }

    /// Value and first-order propagated standard error, assuming independent
    /// symbol estimates given as `(mean, stderr)`.
    pub fn propagate(&self, estimates: &HashMap<WeightSymbol, (f64, f64)>) -> (f64, f64) {
        let means: HashMap<WeightSymbol, f64> =
            estimates.iter().map(|(&k, &(m, _))| (k, m)).collect();
        let value = self.eval(&means);
        let var: f64 = self
            .symbols()
            .into_iter()
            .map(|s| {
                let g = self.partial(s).eval(&means);
                let se = estimates.get(&s).map(|e| e.1).unwrap_or(f64::NAN);
                (g * se).powi(2)
            })
            .sum();
        (value, var.sqrt())
    }

    fn add_term(&mut self, mono: Vec<(WeightSymbol, u32)>, c: Rational) {
        if Zero::is_zero(&c) {
            return;
        }
        let entry = self.terms.entry(mono.clone()).or_insert_with(Zero::zero);
        *entry += c;
        if Zero::is_zero(entry) {
            self.terms.remove(&mono);
        }
    }
}

impl fmt::Display for WeightExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (mono, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            write!(f, "{}", c.abs())?;
            for (s, e) in mono {
                write!(f, "*w{:016x}", s)?;
                if *e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

impl Coefficient for WeightExpr {
    fn zero() -> Self {
        WeightExpr::default()
    }
    fn one() -> Self {
        WeightExpr::constant(rat_int(1))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
    fn times(&self, other: &Self) -> Self {
        let mut out = WeightExpr::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(mul_monomials(ma, mb), ca * cb);
            }
        }
        out
    }
    fn negated(&self) -> Self {
        WeightExpr { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
    fn from_rational(q: &Rational) -> Self {
        WeightExpr::constant(q.clone())
    }
}
