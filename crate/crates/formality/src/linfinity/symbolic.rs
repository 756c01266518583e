//! The cofree cocommutative coalgebra `S^+(V)` on abstract symbols.
//!
//! Letters are graded symbols; Taylor coefficients applied to letters are
//! new symbols tagged by the family. Words are kept sorted, with the Koszul
//! sign of sorting absorbed into the coefficient. A word with a repeated odd
//! letter is zero.

use crate::graded::{ordered_partitions, reorder_sign, splits, is_odd, Sign};
use crate::scalar::{rat_int, Rational};
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Symbol {
    Letter { id: u32, degree: i64 },
    Applied { tag: String, degree: i64, args: Vec<Symbol> },
}

impl Symbol {
    pub fn letter(id: u32, degree: i64) -> Self {
        Symbol::Letter { id, degree }
    }

    pub fn degree(&self) -> i64 {
        match self {
            Symbol::Letter { degree, .. } | Symbol::Applied { degree, .. } => *degree,
        }
    }
}

pub type Word = Vec<Symbol>;

/// Finite linear combination with rational coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct Combination<T: Ord> {
    terms: BTreeMap<T, Rational>,
}

impl<T: Ord + Clone> Default for Combination<T> {
    fn default() -> Self {
        Combination { terms: BTreeMap::new() }
    }
}

impl<T: Ord + Clone> Combination<T> {
    pub fn add(&mut self, t: T, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(t.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn add_all(&mut self, other: &Combination<T>, scale: &Rational) {
        for (t, c) in &other.terms {
            self.add(t.clone(), c * scale);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &Rational)> {
        self.terms.iter()
    }
}

pub fn word_degree(w: &[Symbol]) -> i64 {
    w.iter().map(Symbol::degree).sum()
}

/// Sorts letters, returning the Koszul sign, or `None` if an odd letter
/// repeats.
pub fn canonicalize(letters: &[Symbol]) -> Option<(Sign, Word)> {
    let mut idx: Vec<usize> = (0..letters.len()).collect();
    idx.sort_by(|&a, &b| letters[a].cmp(&letters[b]));
    let odd: Vec<bool> = letters.iter().map(|s| is_odd(s.degree())).collect();
    let sorted: Word = idx.iter().map(|&i| letters[i].clone()).collect();
    if sorted.windows(2).any(|w| w[0] == w[1] && is_odd(w[0].degree())) {
        return None;
    }
    Some((reorder_sign(&idx, &odd), sorted))
}

/// Taylor coefficients of degree `degree`, nonzero only in `arities`.
#[derive(Clone, Debug)]
pub struct AbstractFamily {
    pub tag: String,
    pub degree: i64,
    pub arities: Vec<usize>,
}

impl AbstractFamily {
    pub fn new(tag: &str, degree: i64, arities: &[usize]) -> Self {
        AbstractFamily { tag: tag.to_string(), degree, arities: arities.to_vec() }
    }

    /// The graded-symmetric value on `args`, as a sign and a symbol.
    pub fn apply(&self, args: &[Symbol]) -> Option<(Sign, Symbol)> {
        if !self.arities.contains(&args.len()) {
            return None;
        }
        let (s, sorted) = canonicalize(args)?;
        let degree = self.degree + word_degree(&sorted);
        Some((s, Symbol::Applied { tag: self.tag.clone(), degree, args: sorted }))
    }
}

fn pick(w: &[Symbol], idx: &[usize]) -> Word {
    idx.iter().map(|&i| w[i].clone()).collect()
}

fn parities(w: &[Symbol]) -> Vec<bool> {
    w.iter().map(|s| is_odd(s.degree())).collect()
}

fn add_word(out: &mut Combination<Word>, letters: &[Symbol], sign: Sign, c: &Rational) {
    if let Some((s, w)) = canonicalize(letters) {
        let v = if (sign * s).is_negative() { -c } else { c.clone() };
        out.add(w, v);
    }
}

/// `Q(x1..xn) = Σ_{I⊔J, I≠∅} ε_x(I,J) Q_{|I|}(x_I).x_J`.
pub fn extend_coderivation(q: &AbstractFamily, word: &[Symbol]) -> Combination<Word> {
    let mut out = Combination::default();
    let odd = parities(word);
    let one = rat_int(1);
    for (i, j) in splits(word.len(), true) {
        let seq: Vec<usize> = i.iter().chain(&j).copied().collect();
        let eps = reorder_sign(&seq, &odd);
        if let Some((s, y)) = q.apply(&pick(word, &i)) {
            let mut letters = vec![y];
            letters.extend(pick(word, &j));
            add_word(&mut out, &letters, eps * s, &one);
        }
    }
    out
}

/// `F(x1..xn) = Σ_j 1/j! Σ_{I1⊔..⊔Ij} ε_x F_{|I1|}(x_{I1}) ⋯ F_{|Ij|}(x_{Ij})`.
pub fn extend_morphism(f: &AbstractFamily, word: &[Symbol]) -> Combination<Word> {
    let mut out = Combination::default();
    let odd = parities(word);
    let n = word.len();
    let mut fact = rat_int(1);
    for j in 1..=n {
        fact *= rat_int(j as i64);
        let c = rat_int(1) / fact.clone();
        'parts: for p in ordered_partitions(n, j) {
            let mut sign = reorder_sign(&p.sequence(), &odd);
            let mut letters = Vec::new();
            for b in p.blocks() {
                match f.apply(&pick(word, b)) {
                    Some((s, y)) => {
                        sign *= s;
                        letters.push(y);
                    }
                    None => continue 'parts,
                }
            }
            add_word(&mut out, &letters, sign, &c);
        }
    }
    out
}

pub type Tensor = (Word, Word);

/// `Δ(x1..xn) = Σ_{I⊔J, I,J≠∅} ε_x(I,J) x_I ⊗ x_J`.
pub fn coproduct(word: &[Symbol]) -> Combination<Tensor> {
    let mut out = Combination::default();
    let odd = parities(word);
    for (i, j) in splits(word.len(), false) {
        let seq: Vec<usize> = i.iter().chain(&j).copied().collect();
        let eps = reorder_sign(&seq, &odd);
        let (sa, a) = canonicalize(&pick(word, &i)).expect("subword of a nonzero word");
        let (sb, b) = canonicalize(&pick(word, &j)).expect("subword of a nonzero word");
        let s = eps * sa * sb;
        out.add((a, b), rat_int(s.to_i64()));
    }
    out
}

fn coproduct_of(c: &Combination<Word>) -> Combination<Tensor> {
    let mut out = Combination::default();
    for (w, k) in c.iter() {
        out.add_all(&coproduct(w), k);
    }
    out
}

/// `ΔQ(w) - (Q⊗1 + 1⊗Q)Δ(w)`.
pub fn coderivation_residual(q: &AbstractFamily, word: &[Symbol]) -> Combination<Tensor> {
    let mut out = coproduct_of(&extend_coderivation(q, word));
    for ((a, b), k) in coproduct(word).iter() {
        for (qa, c) in extend_coderivation(q, a).iter() {
            out.add((qa.clone(), b.clone()), -(c * k));
        }
        let s = Sign::pow(q.degree * word_degree(a));
        for (qb, c) in extend_coderivation(q, b).iter() {
            let v = c * k;
            out.add((a.clone(), qb.clone()), if s.is_negative() { v } else { -v });
        }
    }
    out
}

/// `ΔF(w) - (F⊗F)Δ(w)`.
pub fn morphism_residual(f: &AbstractFamily, word: &[Symbol]) -> Combination<Tensor> {
    let mut out = coproduct_of(&extend_morphism(f, word));
    for ((a, b), k) in coproduct(word).iter() {
        let fa = extend_morphism(f, a);
        let fb = extend_morphism(f, b);
        for (x, c1) in fa.iter() {
            for (y, c2) in fb.iter() {
                out.add((x.clone(), y.clone()), -(c1 * c2 * k));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn letters(d: &[i64]) -> Word {
        d.iter().enumerate().map(|(i, &g)| Symbol::letter(i as u32, g)).collect()
    }

    #[test]
    fn two_letter_coderivation() {
        let q = AbstractFamily::new("Q", 1, &[1, 2]);
        let w = letters(&[1, 2]);
        let r = extend_coderivation(&q, &w);
        assert_eq!(r.len(), 3);
        let (_, q1y) = q.apply(&[w[1].clone()]).unwrap();
        let (s, key) = canonicalize(&[w[0].clone(), q1y]).unwrap();
        let expected = Sign::pow(w[0].degree()) * s;
        let got = r.iter().find(|(k, _)| **k == key).map(|(_, c)| c.clone()).unwrap();
        assert_eq!(got, rat_int(expected.to_i64()));
    }

    #[test]
    fn zero_family() {
        let q = AbstractFamily::new("Q", 1, &[]);
        assert!(extend_coderivation(&q, &letters(&[0, 1, 1])).is_zero());
    }

    #[test]
    fn repeated_odd_letter_vanishes() {
        let x = Symbol::letter(0, 1);
        assert!(canonicalize(&[x.clone(), x]).is_none());
    }

    #[test]
    fn identities_on_small_words() {
        let q = AbstractFamily::new("Q", 1, &[1, 2, 3]);
        let f = AbstractFamily::new("F", 0, &[1, 2, 3]);
        for d in [[0, 1, 1], [1, 1, 2], [2, 0, 1]] {
            let w = letters(&d);
            assert!(coderivation_residual(&q, &w).is_zero());
            assert!(morphism_residual(&f, &w).is_zero());
        }
    }
}
