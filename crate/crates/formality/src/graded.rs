//! Signs for graded-commutative reorderings.
//!
//! Degrees are plain integers; which grading they refer to (a space `g` or its
//! shift `g[1]`) is decided by the caller. Only parities matter for signs.

use crate::error::{Error, Result};
use std::fmt;
use std::ops::{Mul, MulAssign, Neg};

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct Sign(bool);

impl Sign {
    pub const PLUS: Sign = Sign(false);
    pub const MINUS: Sign = Sign(true);

    /// `(-1)^n`, valid for negative `n`.
    pub fn pow(n: i64) -> Sign {
        Sign(n.rem_euclid(2) == 1)
    }

    pub fn is_negative(self) -> bool {
        self.0
    }

    pub fn to_i64(self) -> i64 {
        if self.0 {
            -1
        } else {
            1
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign(self.0 ^ rhs.0)
    }
}

impl MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        self.0 ^= rhs.0;
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        Sign(!self.0)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.0 { "-1" } else { "+1" })
    }
}

pub fn is_odd(d: i64) -> bool {
    d.rem_euclid(2) == 1
}

/// Degrees of the letters of a word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DegreeVector(pub Vec<i64>);

impl DegreeVector {
    pub fn new(degrees: Vec<i64>) -> Self {
        DegreeVector(degrees)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parities(&self) -> Vec<bool> {
        self.0.iter().map(|&d| is_odd(d)).collect()
    }

    /// Degrees after shifting by one: `|x|` in `g` becomes `|x| - 1` in `g[1]`.
    pub fn shifted(&self) -> DegreeVector {
        DegreeVector(self.0.iter().map(|d| d - 1).collect())
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }
}

/// Ordered sequence of nonempty pairwise disjoint blocks covering `0..n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct OrderedPartition {
    blocks: Vec<Vec<usize>>,
}

impl OrderedPartition {
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for b in blocks.iter_mut() {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            b.sort_unstable();
            for &i in b.iter() {
                if i >= n {
                    return Err(Error::InvalidPartition(format!("index {} outside 0..{}", i, n)));
                }
                if seen[i] {
                    return Err(Error::InvalidPartition(format!("index {} repeated", i)));
                }
                seen[i] = true;
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("index {} not covered", i)));
        }
        Ok(OrderedPartition { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Concatenation of the blocks: the shuffle permutation as a sequence.
    pub fn sequence(&self) -> Vec<usize> {
        self.blocks.iter().flatten().copied().collect()
    }
}

/// Sign of reordering letters with parities `odd` into the order `seq`
/// (`seq[p]` is the letter placed at position `p`): the signature of the
/// induced permutation on odd letters.
pub fn reorder_sign(seq: &[usize], odd: &[bool]) -> Sign {
    let mut inversions = 0usize;
    for a in 0..seq.len() {
        if !odd[seq[a]] {
            continue;
        }
        for b in a + 1..seq.len() {
            if odd[seq[b]] && seq[a] > seq[b] {
                inversions += 1;
            }
        }
    }
    Sign(inversions % 2 == 1)
}

fn check_permutation(seq: &[usize], n: usize) -> Result<()> {
    if seq.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: seq.len() });
    }
    let mut seen = vec![false; n];
    for &i in seq {
        if i >= n || seen[i] {
            return Err(Error::InvalidPartition(format!("{:?} is not a permutation", seq)));
        }
        seen[i] = true;
    }
    Ok(())
}

/// Koszul sign of bringing a word into the block order of `partition`.
pub fn koszul_sign(partition: &OrderedPartition, degrees: &DegreeVector) -> Result<Sign> {
    if partition.n() != degrees.len() {
        return Err(Error::LengthMismatch { expected: partition.n(), got: degrees.len() });
    }
    Ok(reorder_sign(&partition.sequence(), &degrees.parities()))
}

/// Sign of a permutation of graded letters; pass degrees in the shifted
/// space when working with the symmetric coalgebra of `g[1]`.
pub fn quillen_sign(permutation: &[usize], degrees: &DegreeVector) -> Result<Sign> {
    check_permutation(permutation, degrees.len())?;
    Ok(reorder_sign(permutation, &degrees.parities()))
}

/// Plain signature of the stable permutation moving even letters (by degree
/// in `V`) in front of odd ones.
pub fn unshuffle_sign(degrees: &DegreeVector) -> Sign {
    let mut odd_seen = 0usize;
    let mut inversions = 0usize;
    for &d in &degrees.0 {
        if is_odd(d) {
            odd_seen += 1;
        } else {
            inversions += odd_seen;
        }
    }
    Sign(inversions % 2 == 1)
}

/// Décalage isomorphism `S^n(V[1]) -> Λ^n(V)[n]` on a word with `V`-degrees:
/// the sign in front of `x1 ∧ ... ∧ xn` and the degree of the image.
pub fn decalage(degrees: &DegreeVector) -> (Sign, i64) {
    (unshuffle_sign(degrees), degrees.0.iter().map(|d| d - 1).sum())
}

/// All ordered partitions of `0..n` into `j` nonempty blocks, in
/// lexicographic order of the block sequence. There are `j! S(n, j)`.
pub fn ordered_partitions(n: usize, j: usize) -> Vec<OrderedPartition> {
    if j == 0 || j > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    loop {
        let mut blocks = vec![Vec::new(); j];
        for (i, &l) in labels.iter().enumerate() {
            blocks[l].push(i);
        }
        if blocks.iter().all(|b| !b.is_empty()) {
            out.push(OrderedPartition { blocks });
        }
        let mut p = 0;
        loop {
            if p == n {
                out.sort();
                return out;
            }
            labels[p] += 1;
            if labels[p] < j {
                break;
            }
            labels[p] = 0;
            p += 1;
        }
    }
}

/// Splits of `0..n` into an ordered pair `(I, J)` with `I` nonempty.
/// `J` is empty for the last entry when `allow_empty_tail` is set.
pub fn splits(n: usize, allow_empty_tail: bool) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        if !allow_empty_tail && mask == (1u64 << n) - 1 {
            continue;
        }
        let (i, j): (Vec<usize>, Vec<usize>) = (0..n).partition(|&k| mask & (1 << k) != 0);
        out.push((i, j));
    }
    out
}
