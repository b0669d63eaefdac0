use std::fmt;

use crate::error::{Error, Result};

/// Exponent vector α ∈ ℕⁿ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidInput("multi-index needs n >= 1".into()));
        }
        Ok(MultiIndex(exponents))
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// e_i scaled by `k`.
    pub fn unit(n: usize, i: usize, k: u32) -> Self {
        let mut e = vec![0; n];
        e[i] = k;
        MultiIndex(e)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// |α| = Σ αᵢ.
    pub fn order(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// α! = Π αᵢ!.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&a| factorial(a as usize)).product()
    }

    /// k!/α! with k = |α|, the number of index tuples in the orbit of α.
    pub fn multinomial(&self) -> f64 {
        factorial(self.order()) / self.factorial()
    }

    /// x^α.
    pub fn monomial(&self, x: &[f64]) -> f64 {
        self.0.iter().zip(x).map(|(&a, &xi)| xi.powi(a as i32)).product()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// α − β when β ≤ α componentwise.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0.iter().zip(&other.0).map(|(&a, &b)| a.checked_sub(b)).collect::<Option<Vec<_>>>().map(MultiIndex)
    }

    /// Expands α into a non-decreasing sequence of coordinate indices,
    /// e.g. (2,0,1) ↦ [0,0,2].
    pub fn to_slots(&self) -> Vec<usize> {
        self.0.iter().enumerate().flat_map(|(i, &a)| std::iter::repeat_n(i, a as usize)).collect()
    }

    /// Inverse of [`MultiIndex::to_slots`] for any ordering of the slots.
    pub fn from_slots(n: usize, slots: &[usize]) -> MultiIndex {
        let mut e = vec![0u32; n];
        for &s in slots {
            e[s] += 1;
        }
        MultiIndex(e)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// dim ℝ_d[X₁..Xₙ] = C(n+d, n).
pub fn basis_dim(n: usize, d: usize) -> usize {
    binomial(n + d, n)
}

/// Number of multi-indices of length `n` with |α| = m.
fn count_homogeneous(n: usize, m: usize) -> usize {
    if n == 0 {
        return usize::from(m == 0);
    }
    binomial(m + n - 1, n - 1)
}

/// All α with |α| = m, in descending lexicographic order.
pub fn homogeneous(n: usize, m: usize) -> Vec<MultiIndex> {
    let mut out = Vec::with_capacity(count_homogeneous(n, m));
    let mut cur = vec![0u32; n];
    fill_homogeneous(&mut cur, 0, m, &mut out);
    out
}

fn fill_homogeneous(cur: &mut Vec<u32>, pos: usize, rest: usize, out: &mut Vec<MultiIndex>) {
    let n = cur.len();
    if pos == n - 1 {
        cur[pos] = rest as u32;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for a in (0..=rest).rev() {
        cur[pos] = a as u32;
        fill_homogeneous(cur, pos + 1, rest - a, out);
    }
    cur[pos] = 0;
}

/// The graded-lexicographic monomial basis of ℝ_d[X]: by total degree, then
/// descending lex (so X₁ precedes X₂). Every coefficient vector and matrix
/// column in the crate is indexed through this ordering.
pub fn monomials(n: usize, d: usize) -> Vec<MultiIndex> {
    (0..=d).flat_map(|m| homogeneous(n, m)).collect()
}

/// Position of α within [`homogeneous`]`(n, |α|)`.
pub fn rank_homogeneous(alpha: &MultiIndex) -> usize {
    let e = alpha.exponents();
    let n = e.len();
    let mut rest = alpha.order();
    let mut r = 0;
    for (pos, &a) in e.iter().enumerate().take(n - 1) {
        let a = a as usize;
        for bigger in a + 1..=rest {
            r += count_homogeneous(n - pos - 1, rest - bigger);
        }
        rest -= a;
    }
    r
}

/// Position of α within [`monomials`]`(n, d)` for any d ≥ |α|.
pub fn rank(alpha: &MultiIndex) -> usize {
    let m = alpha.order();
    let below = if m == 0 { 0 } else { basis_dim(alpha.n(), m - 1) };
    below + rank_homogeneous(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order_in_two_variables() {
        let m: Vec<String> = monomials(2, 2).iter().map(|a| a.to_string()).collect();
        assert_eq!(m, ["(0,0)", "(1,0)", "(0,1)", "(2,0)", "(1,1)", "(0,2)"]);
    }

    #[test]
    fn rank_inverts_enumeration() {
        for n in 1..=4 {
            for (i, a) in monomials(n, 5).iter().enumerate() {
                assert_eq!(rank(a), i, "{a}");
            }
            assert_eq!(monomials(n, 5).len(), basis_dim(n, 5));
        }
    }

    #[test]
    fn order_and_factorials() {
        let a = MultiIndex::new(vec![2, 0, 1]).unwrap();
        assert_eq!(a.order(), 3);
        assert_eq!(a.factorial(), 2.0);
        assert_eq!(a.multinomial(), 3.0);
        assert_eq!(a.to_slots(), vec![0, 0, 2]);
        assert_eq!(MultiIndex::from_slots(3, &[2, 0, 0]), a);
        assert_eq!(a.monomial(&[2.0, 5.0, 3.0]), 12.0);
    }

    #[test]
    fn empty_index_rejected() {
        assert!(MultiIndex::new(vec![]).is_err());
    }
}
