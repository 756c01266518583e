//! Truncated formal power series in `ħ`.

/// `Σ_{k=0}^{N} ħ^k c_k`; `N` is the truncation order.
#[derive(Clone, PartialEq, Debug)]
pub struct FormalSeries<T> {
    coefficients: Vec<T>,
}

impl<T: Clone> FormalSeries<T> {
    pub fn new(coefficients: Vec<T>) -> Self {
        assert!(!coefficients.is_empty(), "a series has at least the constant term");
        FormalSeries { coefficients }
    }

    /// `ħ^power · value` truncated at `order`, with `zero` elsewhere.
    pub fn monomial(zero: T, value: T, power: usize, order: usize) -> Self {
        let mut c = vec![zero; order + 1];
        if power <= order {
            c[power] = value;
        }
        FormalSeries { coefficients: c }
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficient(&self, k: usize) -> &T {
        &self.coefficients[k]
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn map<S: Clone>(&self, f: impl Fn(&T) -> S) -> FormalSeries<S> {
        FormalSeries { coefficients: self.coefficients.iter().map(f).collect() }
    }
}

/// Sequences of positive integers summing to `total`.
pub fn compositions(total: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=total {
        for mut rest in compositions(total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}
