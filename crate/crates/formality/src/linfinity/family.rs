//! Taylor coefficients on concrete elements and the projected structure
//! equations of L∞ algebras and morphisms.
//!
//! Signs `ε` are Koszul signs for the degrees in the shifted space `g[1]`.

use crate::dpoly::{self, PolyDiffOperator};
use crate::error::Result;
use crate::graded::{ordered_partitions, reorder_sign, splits, is_odd, Sign};
use crate::scalar::{rat_int, Coefficient, Rational};
use crate::tpoly::{self, MultiVector};

/// Element of a graded vector space.
pub trait Graded: Clone {
    fn shifted_degree(&self) -> i64;
    fn is_zero(&self) -> bool;
    /// Sum; zero operands of any nominal degree are absorbed.
    fn plus(&self, other: &Self) -> Self;
    fn signed(&self, s: Sign) -> Self;
    fn scaled(&self, q: &Rational) -> Self;
}

impl Graded for MultiVector {
    fn shifted_degree(&self) -> i64 {
        MultiVector::shifted_degree(self)
    }
    fn is_zero(&self) -> bool {
        MultiVector::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        if other.is_zero() {
            self.clone()
        } else if self.is_zero() {
            other.clone()
        } else {
            self.add(other)
        }
    }
    fn signed(&self, s: Sign) -> Self {
        self.scale_sign(s)
    }
    fn scaled(&self, q: &Rational) -> Self {
        self.scale(q)
    }
}

impl<R: Coefficient> Graded for PolyDiffOperator<R> {
    fn shifted_degree(&self) -> i64 {
        PolyDiffOperator::shifted_degree(self)
    }
    fn is_zero(&self) -> bool {
        PolyDiffOperator::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn signed(&self, s: Sign) -> Self {
        self.scale_sign(s)
    }
    fn scaled(&self, q: &Rational) -> Self {
        self.scale_rational(q)
    }
}

/// A family of graded-symmetric multilinear maps `S^k(In) -> Out`.
pub trait Taylor {
    type In: Graded;
    type Out: Graded;
    /// Degree of every coefficient in the shifted grading.
    fn degree(&self) -> i64;
    /// `None` stands for zero.
    fn apply(&self, args: &[Self::In]) -> Result<Option<Self::Out>>;
}

fn accumulate<T: Graded>(acc: &mut Option<T>, v: T) {
    if v.is_zero() {
        return;
    }
    *acc = Some(match acc.take() {
        Some(a) => a.plus(&v),
        None => v,
    });
}

fn shifted_parities<T: Graded>(xs: &[T]) -> Vec<bool> {
    xs.iter().map(|x| is_odd(x.shifted_degree())).collect()
}

fn pick<T: Clone>(xs: &[T], idx: &[usize]) -> Vec<T> {
    idx.iter().map(|&i| xs[i].clone()).collect()
}

/// `π Q Q (x1..xn) = Σ_{I⊔J, I≠∅} ε(I,J) Q_{1+|J|}(Q_{|I|}(x_I). x_J)`;
/// zero for an L∞ structure.
pub fn master_residual<Q>(q: &Q, xs: &[Q::In]) -> Result<Option<Q::In>>
where
    Q: Taylor<Out = <Q as Taylor>::In>,
{
    let odd = shifted_parities(xs);
    let mut acc = None;
    for (i, j) in splits(xs.len(), true) {
        let seq: Vec<usize> = i.iter().chain(&j).copied().collect();
        let eps = reorder_sign(&seq, &odd);
        if let Some(y) = q.apply(&pick(xs, &i))? {
            let mut args = vec![y];
            args.extend(pick(xs, &j));
            if let Some(z) = q.apply(&args)? {
                accumulate(&mut acc, z.signed(eps));
            }
        }
    }
    Ok(acc)
}

/// `(Q' F)_n = Σ_j 1/j! Σ_{I1⊔..⊔Ij} ε Q'_j(F(x_{I1}) ⋯ F(x_{Ij}))`.
pub fn push_then_bracket<F, Q2>(f: &F, q2: &Q2, xs: &[F::In]) -> Result<Option<F::Out>>
where
    F: Taylor,
    Q2: Taylor<In = F::Out, Out = F::Out>,
{
    let odd = shifted_parities(xs);
    let n = xs.len();
    let mut acc = None;
    let mut fact = rat_int(1);
    for j in 1..=n {
        fact *= rat_int(j as i64);
        let c = rat_int(1) / fact.clone();
        'parts: for p in ordered_partitions(n, j) {
            let eps = reorder_sign(&p.sequence(), &odd);
            let mut images = Vec::with_capacity(j);
            for b in p.blocks() {
                match f.apply(&pick(xs, b))? {
                    Some(y) => images.push(y),
                    None => continue 'parts,
                }
            }
            if let Some(z) = q2.apply(&images)? {
                accumulate(&mut acc, z.signed(eps).scaled(&c));
            }
        }
    }
    Ok(acc)
}

/// `(F Q)_n = Σ_{I⊔J, I≠∅} ε(I,J) F_{1+|J|}(Q_{|I|}(x_I). x_J)`.
pub fn bracket_then_push<F, Q1>(f: &F, q1: &Q1, xs: &[F::In]) -> Result<Option<F::Out>>
where
    F: Taylor,
    Q1: Taylor<In = F::In, Out = F::In>,
{
    let odd = shifted_parities(xs);
    let mut acc = None;
    for (i, j) in splits(xs.len(), true) {
        let seq: Vec<usize> = i.iter().chain(&j).copied().collect();
        let eps = reorder_sign(&seq, &odd);
        if let Some(y) = q1.apply(&pick(xs, &i))? {
            let mut args = vec![y];
            args.extend(pick(xs, &j));
            if let Some(z) = f.apply(&args)? {
                accumulate(&mut acc, z.signed(eps));
            }
        }
    }
    Ok(acc)
}

/// `(Q'F)_n - (FQ)_n`; zero for an L∞ morphism.
pub fn morphism_equation_residual<F, Q1, Q2>(f: &F, q1: &Q1, q2: &Q2, xs: &[F::In]) -> Result<Option<F::Out>>
where
    F: Taylor,
    Q1: Taylor<In = F::In, Out = F::In>,
    Q2: Taylor<In = F::Out, Out = F::Out>,
{
    let lhs = push_then_bracket(f, q2, xs)?;
    let rhs = bracket_then_push(f, q1, xs)?;
    Ok(match (lhs, rhs) {
        (Some(a), Some(b)) => Some(a.plus(&b.signed(Sign::MINUS))),
        (Some(a), None) => Some(a),
        (None, Some(b)) => Some(b.signed(Sign::MINUS)),
        (None, None) => None,
    })
}

/// Schouten structure on `T_poly[1]`: `Q_1 = 0`, `Q_2 = tpoly::q2`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SchoutenStructure;

impl Taylor for SchoutenStructure {
    type In = MultiVector;
    type Out = MultiVector;
    fn degree(&self) -> i64 {
        1
    }
    fn apply(&self, args: &[MultiVector]) -> Result<Option<MultiVector>> {
        Ok(match args {
            [a, b] => Some(tpoly::q2(a, b)).filter(|r| !r.is_zero()),
            _ => None,
        })
    }
}

/// `Q'_1 = -d_H`, `Q'_2 = (-1)^{|A1|(|A2|-1)} [A1, A2]_G` over `R`.
#[derive(Clone, Copy, Debug)]
pub struct Hochschild<R: Coefficient>(std::marker::PhantomData<R>);

impl<R: Coefficient> Default for Hochschild<R> {
    fn default() -> Self {
        Hochschild(std::marker::PhantomData)
    }
}

impl<R: Coefficient> Taylor for Hochschild<R> {
    type In = PolyDiffOperator<R>;
    type Out = PolyDiffOperator<R>;
    fn degree(&self) -> i64 {
        1
    }
    fn apply(&self, args: &[PolyDiffOperator<R>]) -> Result<Option<PolyDiffOperator<R>>> {
        let r = match args {
            [a] => dpoly::q1(a),
            [a, b] => dpoly::q2(a, b),
            _ => return Ok(None),
        };
        Ok(Some(r).filter(|r| !r.is_zero()))
    }
}
