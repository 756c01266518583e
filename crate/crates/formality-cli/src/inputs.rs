//! Seeded random inputs for the verification suites.

use formality::linfinity::symbolic::{AbstractFamily, Symbol, Word};
use formality::scalar::rat_int;
use formality::{MultiVector, PolyDiffOperator, Polynomial};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn polynomial(rng: &mut ChaCha8Rng, dim: usize, max_degree: u32) -> Polynomial {
    let mut p = Polynomial::zero(dim);
    for _ in 0..rng.gen_range(1..=3) {
        let mut e = vec![0u32; dim];
        for _ in 0..rng.gen_range(0..=max_degree) {
            e[rng.gen_range(0..dim)] += 1;
        }
        let c = rng.gen_range(-3i64..=3);
        p.add_term(e, rat_int(c));
    }
    p
}

pub fn multivector(rng: &mut ChaCha8Rng, dim: usize, order: usize, max_degree: u32) -> MultiVector {
    let mut out = MultiVector::zero(dim, order);
    let all: Vec<usize> = (0..dim).collect();
    for _ in 0..rng.gen_range(1..=2) {
        let idx: Vec<usize> = all.choose_multiple(rng, order).copied().collect();
        out.add_term(&idx, polynomial(rng, dim, max_degree));
    }
    out
}

pub fn operator(rng: &mut ChaCha8Rng, dim: usize, arity: usize, max_order: u32) -> PolyDiffOperator {
    let mut out = PolyDiffOperator::zero(dim, arity);
    for _ in 0..rng.gen_range(1..=2) {
        let orders = (0..arity)
            .map(|_| {
                let mut o = vec![0u32; dim];
                for _ in 0..rng.gen_range(0..=max_order) {
                    o[rng.gen_range(0..dim)] += 1;
                }
                o
            })
            .collect();
        out.add_term(orders, polynomial(rng, dim, 1));
    }
    out
}

pub fn word(rng: &mut ChaCha8Rng, len: usize) -> Word {
    (0..len).map(|i| Symbol::letter(i as u32, rng.gen_range(-1..=2))).collect()
}

pub fn family(rng: &mut ChaCha8Rng, tag: &str, degree: i64, max_arity: usize) -> AbstractFamily {
    let arities: Vec<usize> = (1..=max_arity).filter(|_| rng.gen_bool(0.7)).collect();
    AbstractFamily::new(tag, degree, &arities)
}
