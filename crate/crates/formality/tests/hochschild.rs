mod common;

use common::*;
use formality::dpoly::{q1, q1_via_bracket, q2};
use formality::graded::Sign;
use formality::{PolyDiffOperator, Polynomial};
use proptest::prelude::*;

fn pair(seed: u64) -> (PolyDiffOperator, PolyDiffOperator, usize) {
    let mut r = rng(seed);
    let dim = 1 + (seed % 2) as usize;
    let a = operator(&mut r, dim, (seed % 3) as usize, 2);
    let b = operator(&mut r, dim, ((seed / 3) % 3) as usize, 2);
    (a, b, dim)
}

fn args(seed: u64, dim: usize, k: usize) -> Vec<Polynomial> {
    let mut r = rng(seed ^ 0x5eed);
    (0..k).map(|_| poly(&mut r, dim, 3)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hochschild_matches_pointwise_formula(seed in any::<u64>()) {
        let (a, _, dim) = pair(seed);
        let fs = args(seed, dim, a.arity() + 1);
        prop_assert_eq!(a.hochschild().apply(&fs), hochschild_on(&a, &fs));
    }

    #[test]
    fn circ_matches_pointwise_insertion(seed in any::<u64>()) {
        let (a, b, dim) = pair(seed);
        let m = (a.arity() + b.arity()).saturating_sub(1);
        let fs = args(seed, dim, m);
        if a.arity() > 0 {
            prop_assert_eq!(a.circ(&b).apply(&fs), circ_on(&a, &b, &fs));
        }
    }

    #[test]
    fn hochschild_squares_to_zero(seed in any::<u64>()) {
        let (a, _, _) = pair(seed);
        prop_assert!(a.hochschild().hochschild().is_zero());
    }

    #[test]
    fn unary_coefficient_paths_agree(seed in any::<u64>()) {
        let (a, _, _) = pair(seed);
        prop_assert_eq!(q1(&a), q1_via_bracket(&a));
        prop_assert_eq!(q1(&a), a.coboundary().scale_sign(Sign::pow(a.degree())));
    }

    #[test]
    fn differential_is_a_graded_derivation(seed in any::<u64>()) {
        let (a, b, _) = pair(seed);
        let lhs = a.gerstenhaber(&b).coboundary();
        let rhs = a.coboundary().gerstenhaber(&b).add(&a.gerstenhaber(&b.coboundary()).scale_sign(Sign::pow(a.degree())));
        prop_assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn binary_coefficient_is_graded_symmetric(seed in any::<u64>()) {
        let (a, b, _) = pair(seed);
        let s = Sign::pow(a.shifted_degree() * b.shifted_degree());
        prop_assert_eq!(q2(&a, &b), q2(&b, &a).scale_sign(s));
    }
}

#[test]
fn product_is_a_cocycle_and_squares_to_zero() {
    let mu = PolyDiffOperator::multiplication(2);
    assert!(mu.hochschild().is_zero());
    assert!(mu.gerstenhaber(&mu).is_zero());
    assert_eq!(mu.apply(&[x(2, 0), x(2, 1)]), &x(2, 0) * &x(2, 1));
}

#[test]
fn derivation_is_a_cocycle() {
    let d = PolyDiffOperator::term(x(2, 1), vec![vec![1, 0]]);
    assert!(d.hochschild().is_zero());
    let second: PolyDiffOperator = PolyDiffOperator::term(Polynomial::one(2), vec![vec![2, 0]]);
    assert!(!second.hochschild().is_zero());
}
