//! The graph-weight L∞ morphism `U: T_poly -> D_poly`, Maurer–Cartan
//! elements, star products and gauge actions.
//!
//! `U_n(α_1..α_n) = Σ_m Σ_Γ W_Γ B_Γ(α_1..α_n)` over canonical admissible
//! graphs with `2n + m - 2` edges, where `W_Γ = ∫ ∧ dΦ / (2π)^{|E|}` is kept
//! as a formal symbol keyed by the graph hash. Numbers enter only through
//! [`KontsevichMorphism::estimates`].

use super::family::{master_residual, Graded, Hochschild, SchoutenStructure, Taylor};
use super::series::{compositions, FormalSeries};
use crate::dpoly::{self, PolyDiffOperator};
use crate::error::{Error, Result};
use crate::graded::{is_odd, reorder_sign};
use crate::graphs::{enumerate_with_out_degrees, graph_operator, AdmissibleGraph};
use crate::poly::Polynomial;
use crate::scalar::{rat, rat_int, Coefficient, Rational, WeightExpr, WeightSymbol};
use crate::tpoly::{self, MultiVector};
use crate::weights::WeightProvider;
use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

/// Highest `ħ` order supported by [`star_product`].
pub const MAX_STAR_ORDER: usize = 3;

pub type WeightedOperator = PolyDiffOperator<WeightExpr>;

/// Estimated `(mean, stderr)` of every weight symbol.
pub type Estimates = HashMap<WeightSymbol, (f64, f64)>;

pub struct KontsevichMorphism<'a> {
    provider: &'a dyn WeightProvider,
    graphs: Mutex<BTreeMap<WeightSymbol, AdmissibleGraph>>,
}

impl<'a> KontsevichMorphism<'a> {
    pub fn new(provider: &'a dyn WeightProvider) -> Self {
        KontsevichMorphism { provider, graphs: Mutex::new(BTreeMap::new()) }
    }

    /// Graphs whose weights occur in the operators built so far.
    pub fn graphs(&self) -> Vec<AdmissibleGraph> {
        self.graphs.lock().expect("graph registry").values().cloned().collect()
    }

    pub fn estimates(&self) -> Result<Estimates> {
        let mut out = HashMap::new();
        for g in self.graphs() {
            let w = self.provider.weight(&g)?;
            out.insert(g.hash(), w.expansion_coefficient(&g));
        }
        Ok(out)
    }

    /// `U_n` on homogeneous polyvector fields.
    pub fn component(&self, alphas: &[MultiVector]) -> Result<Option<WeightedOperator>> {
        let n = alphas.len();
        if n == 0 || alphas.iter().any(|a| a.is_zero()) {
            return Ok(None);
        }
        let ks: Vec<usize> = alphas.iter().map(|a| a.order()).collect();
        let m = ks.iter().sum::<usize>() as i64 - 2 * n as i64 + 2;
        if m < 0 {
            return Ok(None);
        }
        let dim = alphas[0].dim();
        let mut acc = PolyDiffOperator::<WeightExpr>::zero(dim, m as usize);
        for g in enumerate_with_out_degrees(n, m as usize, &ks) {
            let b = graph_operator(&g, alphas)?;
            if b.is_zero() {
                continue;
            }
            let h = g.hash();
            self.graphs.lock().expect("graph registry").insert(h, g);
            let w = WeightExpr::symbol(h);
            acc = acc.add(&b.map_coefficients(|c| w.scaled(c)));
        }
        Ok(Some(acc).filter(|a| !a.is_zero()))
    }
}

impl Taylor for KontsevichMorphism<'_> {
    type In = MultiVector;
    type Out = WeightedOperator;
    fn degree(&self) -> i64 {
        0
    }
    fn apply(&self, args: &[MultiVector]) -> Result<Option<WeightedOperator>> {
        self.component(args)
    }
}

fn accumulate(acc: &mut Option<WeightedOperator>, v: WeightedOperator) {
    if v.is_zero() {
        return;
    }
    *acc = Some(match acc.take() {
        Some(a) => a.add(&v),
        None => v,
    });
}

/// Residual of the morphism equation with `Q_1 = 0` on `T_poly`:
/// `Q'_1 U_n(α) + ½ Σ_{I⊔J} ε_α(I,J) Q'_2(U(α_I).U(α_J))
///  - ½ Σ_{k≠l} ε_α(k,l,..) U_{n-1}(Q_2(α_k.α_l).α_rest)`.
pub fn formality_residual(u: &KontsevichMorphism, alphas: &[MultiVector]) -> Result<Option<WeightedOperator>> {
    let n = alphas.len();
    let odd: Vec<bool> = alphas.iter().map(|a| is_odd(a.shifted_degree())).collect();
    let half = rat(1, 2);
    let mut acc = None;
    if let Some(un) = u.component(alphas)? {
        accumulate(&mut acc, dpoly::q1(&un));
    }
    for (i, j) in crate::graded::splits(n, false) {
        let seq: Vec<usize> = i.iter().chain(&j).copied().collect();
        let eps = reorder_sign(&seq, &odd);
        let ai: Vec<MultiVector> = i.iter().map(|&k| alphas[k].clone()).collect();
        let aj: Vec<MultiVector> = j.iter().map(|&k| alphas[k].clone()).collect();
        if let (Some(x), Some(y)) = (u.component(&ai)?, u.component(&aj)?) {
            accumulate(&mut acc, dpoly::q2(&x, &y).scale_sign(eps).scale_rational(&half));
        }
    }
    for k in 0..n {
        for l in 0..n {
            if k == l {
                continue;
            }
            let rest: Vec<usize> = (0..n).filter(|&t| t != k && t != l).collect();
            let mut seq = vec![k, l];
            seq.extend(&rest);
            let eps = reorder_sign(&seq, &odd);
            let q = tpoly::q2(&alphas[k], &alphas[l]);
            if q.is_zero() {
                continue;
            }
            let mut args = vec![q];
            args.extend(rest.iter().map(|&t| alphas[t].clone()));
            if let Some(v) = u.component(&args)? {
                accumulate(&mut acc, v.scale_sign(-eps).scale_rational(&half));
            }
        }
    }
    Ok(acc)
}

/// Value and propagated standard error of the largest coefficient of a
/// weighted operator, ranked by `|value| / stderr`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualBound {
    pub max_abs: f64,
    pub max_sigma: f64,
    pub worst_ratio: f64,
    pub exact_zero: bool,
}

pub fn bound_operator(op: Option<&WeightedOperator>, estimates: &Estimates) -> ResidualBound {
    let mut b = ResidualBound { max_abs: 0.0, max_sigma: 0.0, worst_ratio: 0.0, exact_zero: true };
    if let Some(op) = op {
        for (_, poly) in op.terms() {
            for (_, c) in poly.terms() {
                b.exact_zero = false;
                let (v, s) = c.propagate(estimates);
                b.max_abs = b.max_abs.max(v.abs());
                b.max_sigma = b.max_sigma.max(s);
                let ratio = if s > 0.0 { v.abs() / s } else if v == 0.0 { 0.0 } else { f64::INFINITY };
                b.worst_ratio = b.worst_ratio.max(ratio);
            }
        }
    }
    b
}

fn series_term<T: Taylor<In = MultiVector>>(
    f: &T,
    v: &FormalSeries<MultiVector>,
    total: usize,
) -> Result<Option<T::Out>> {
    let mut acc: Option<T::Out> = None;
    let mut fact = rat_int(1);
    for k in 1..=total {
        fact *= rat_int(k as i64);
        let c = rat_int(1) / fact.clone();
        for comp in compositions(total).into_iter().filter(|c| c.len() == k) {
            let args: Vec<MultiVector> = comp.iter().map(|&i| v.coefficient(i).clone()).collect();
            if let Some(y) = f.apply(&args)? {
                let y = y.scaled(&c);
                acc = Some(match acc {
                    Some(a) => a.plus(&y),
                    None => y,
                });
            }
        }
    }
    Ok(acc)
}

fn check_formal(v: &FormalSeries<MultiVector>) -> Result<()> {
    if !v.coefficient(0).is_zero() {
        return Err(Error::InvalidInput("a formal Maurer–Cartan element has no ħ^0 term".into()));
    }
    Ok(())
}

/// `Σ_k 1/k! Q_k(v, .., v)` order by order for the Schouten structure.
pub fn maurer_cartan_residual_tpoly(v: &FormalSeries<MultiVector>) -> Result<Vec<Option<MultiVector>>> {
    check_formal(v)?;
    (0..=v.order()).map(|n| series_term(&SchoutenStructure, v, n)).collect()
}

/// `Q'_1(w) + ½ Q'_2(w, w)` order by order.
pub fn maurer_cartan_residual_dpoly<R: Coefficient>(
    w: &FormalSeries<PolyDiffOperator<R>>,
) -> Vec<PolyDiffOperator<R>> {
    let dim = w.coefficient(0).dim();
    let arity = w.coefficient(0).arity() + 1;
    (0..=w.order())
        .map(|n| {
            let mut acc = dpoly::q1(w.coefficient(n));
            for a in 0..=n {
                let t = dpoly::q2(w.coefficient(a), w.coefficient(n - a)).scale_rational(&rat(1, 2));
                acc = acc.add(&t);
            }
            if acc.is_zero() {
                PolyDiffOperator::zero(dim, arity)
            } else {
                acc
            }
        })
        .collect()
}

/// `w = Σ_n 1/n! U_n(v, .., v)` truncated at the order of `v`.
pub fn pushforward(u: &KontsevichMorphism, v: &FormalSeries<MultiVector>) -> Result<FormalSeries<WeightedOperator>> {
    check_formal(v)?;
    let dim = v.coefficient(0).dim();
    let mut coeffs = Vec::new();
    for n in 0..=v.order() {
        coeffs.push(series_term(u, v, n)?.unwrap_or_else(|| PolyDiffOperator::zero(dim, 2)));
    }
    Ok(FormalSeries::new(coeffs))
}

/// `f ⋆ g = f g + Σ_{k≥1} ħ^k B_k(f, g)` with weight symbols unevaluated.
#[derive(Clone, Debug)]
pub struct StarProduct {
    pub series: FormalSeries<WeightedOperator>,
    pub estimates: Estimates,
}

pub fn star_product(pi: &MultiVector, order: usize, provider: &dyn WeightProvider) -> Result<StarProduct> {
    if pi.order() != 2 {
        return Err(Error::InvalidInput(format!("a star product needs a bivector, got order {}", pi.order())));
    }
    if order > MAX_STAR_ORDER {
        return Err(Error::Unsupported(format!("ħ order {} exceeds the supported {}", order, MAX_STAR_ORDER)));
    }
    let dim = pi.dim();
    let v = FormalSeries::monomial(MultiVector::zero(dim, 2), pi.clone(), 1, order);
    let u = KontsevichMorphism::new(provider);
    let w = pushforward(&u, &v)?;
    let mut coeffs = w.coefficients().to_vec();
    coeffs[0] = PolyDiffOperator::multiplication(dim);
    Ok(StarProduct { series: FormalSeries::new(coeffs), estimates: u.estimates()? })
}

impl StarProduct {
    pub fn order(&self) -> usize {
        self.series.order()
    }

    /// Coefficients with weights replaced by their estimates.
    pub fn numeric(&self) -> FormalSeries<PolyDiffOperator<f64>> {
        let vals: HashMap<WeightSymbol, f64> = self.estimates.iter().map(|(&k, &(m, _))| (k, m)).collect();
        self.series.map(|op| op.map_coefficients(|c| c.eval(&vals)))
    }

    /// `f ⋆ g` order by order.
    pub fn apply(&self, f: &Polynomial<WeightExpr>, g: &Polynomial<WeightExpr>) -> Vec<Polynomial<WeightExpr>> {
        self.series.coefficients().iter().map(|b| b.apply(&[f.clone(), g.clone()])).collect()
    }

    /// `(f ⋆ g) ⋆ h - f ⋆ (g ⋆ h)` order by order.
    pub fn associator(&self, f: &Polynomial, g: &Polynomial, h: &Polynomial) -> Vec<Polynomial<WeightExpr>> {
        let (f, g, h) = (f.lift(), g.lift(), h.lift());
        let fg = self.apply(&f, &g);
        let gh = self.apply(&g, &h);
        let b = self.series.coefficients();
        (0..=self.order())
            .map(|n| {
                let mut acc = Polynomial::zero(f.dim());
                for a in 0..=n {
                    acc = &acc + &b[a].apply(&[fg[n - a].clone(), h.clone()]);
                    acc = &acc - &b[a].apply(&[f.clone(), gh[n - a].clone()]);
                }
                acc
            })
            .collect()
    }

    /// Maurer–Cartan residual of `star - μ` in `D_poly[1]`, order by order.
    pub fn maurer_cartan_residual(&self) -> Vec<WeightedOperator> {
        let mut c = self.series.coefficients().to_vec();
        c[0] = PolyDiffOperator::zero(c[0].dim(), 2);
        maurer_cartan_residual_dpoly(&FormalSeries::new(c))
    }
}

/// Worst coefficient of a weighted polynomial.
pub fn bound_polynomial(p: &Polynomial<WeightExpr>, estimates: &Estimates) -> ResidualBound {
    let op = PolyDiffOperator::function(p.clone());
    bound_operator(Some(&op), estimates)
}

/// Which differential `d` enters the gauge action on `D_poly`.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum DifferentialConvention {
    /// `d = -[μ, ·]_G`.
    Coboundary,
    /// `d = d_H`.
    Hochschild,
}

/// Infinitesimal gauge action `α.γ = dα + [α, γ]_G` on `D_poly`.
pub fn gauge_dpoly<R: Coefficient>(
    alpha: &PolyDiffOperator<R>,
    gamma: &PolyDiffOperator<R>,
    convention: DifferentialConvention,
) -> PolyDiffOperator<R> {
    let d = match convention {
        DifferentialConvention::Coboundary => alpha.coboundary(),
        DifferentialConvention::Hochschild => alpha.hochschild(),
    };
    d.add(&alpha.gerstenhaber(gamma))
}

/// Infinitesimal gauge action on `T_poly`, whose differential vanishes:
/// `α.γ = [α, γ]'_S`.
pub fn gauge_tpoly(alpha: &MultiVector, gamma: &MultiVector) -> MultiVector {
    alpha.bracket_prime(gamma)
}

/// Projected master equation `π Q Q = 0` for the Schouten structure.
pub fn schouten_master_residual(xs: &[MultiVector]) -> Result<Option<MultiVector>> {
    master_residual(&SchoutenStructure, xs)
}

/// Projected master equation for the Hochschild structure.
pub fn hochschild_master_residual(xs: &[PolyDiffOperator<Rational>]) -> Result<Option<PolyDiffOperator<Rational>>> {
    master_residual(&Hochschild::<Rational>::default(), xs)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{McConfig, MonteCarloProvider};

    fn x(i: usize) -> Polynomial {
        Polynomial::variable(2, i)
    }

    #[test]
    fn formality_at_one_is_exact() {
        let p = MonteCarloProvider::new(McConfig::default().with_samples(1000));
        let u = KontsevichMorphism::new(&p);
        let pi = MultiVector::term(2, &[0, 1], &x(0) * &x(1)).unwrap();
        let xi = MultiVector::term(2, &[1], &x(0) * &x(0)).unwrap();
        for a in [pi, xi] {
            let r = formality_residual(&u, &[a]).unwrap();
            assert!(r.map_or(true, |r| r.is_zero()));
        }
    }

    #[test]
    fn rejects_non_bivector() {
        let p = MonteCarloProvider::new(McConfig::default().with_samples(10));
        let xi = MultiVector::term(2, &[1], x(0)).unwrap();
        assert!(matches!(star_product(&xi, 1, &p), Err(Error::InvalidInput(_))));
        let pi = MultiVector::term(2, &[0, 1], x(0)).unwrap();
        assert!(matches!(star_product(&pi, 9, &p), Err(Error::Unsupported(_))));
    }

    #[test]
    fn zero_order_star_is_product() {
        let p = MonteCarloProvider::new(McConfig::default().with_samples(10));
        let pi = MultiVector::term(2, &[0, 1], x(0)).unwrap();
        let s = star_product(&pi, 0, &p).unwrap();
        assert_eq!(s.series.coefficient(0), &PolyDiffOperator::multiplication(2));
    }

    #[test]
    fn gauge_with_constant_derivation() {
        let d1 = PolyDiffOperator::<Rational>::term(Polynomial::one(2), vec![vec![1, 0]]);
        let gamma = PolyDiffOperator::term(Polynomial::one(2), vec![vec![0, 1], vec![1, 0]]);
        for c in [DifferentialConvention::Coboundary, DifferentialConvention::Hochschild] {
            assert!(gauge_dpoly(&d1, &gamma, c).is_zero());
        }
        let a = MultiVector::term(2, &[0], Polynomial::one(2)).unwrap();
        let g = MultiVector::term(2, &[0, 1], Polynomial::one(2)).unwrap();
        assert!(gauge_tpoly(&a, &g).is_zero());
    }
}
