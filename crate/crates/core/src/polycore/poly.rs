use serde::{Deserialize, Serialize};

use super::multiindex::{basis_dim, monomials, rank, MultiIndex};
use crate::error::{Error, Result};

/// Dense polynomial in ℝ_d[X₁..Xₙ], coefficients in graded-lex order
/// (see [`monomials`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly {
    n: usize,
    d: usize,
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn zero(n: usize, d: usize) -> Self {
        Poly { n, d, coeffs: vec![0.0; basis_dim(n, d)] }
    }

    pub fn constant(n: usize, d: usize, c: f64) -> Self {
        let mut p = Poly::zero(n, d);
        p.coeffs[0] = c;
        p
    }

    pub fn from_coeffs(n: usize, d: usize, coeffs: Vec<f64>) -> Result<Self> {
        let want = basis_dim(n, d);
        if coeffs.len() != want {
            return Err(Error::DimensionMismatch { expected: want, got: coeffs.len() });
        }
        Ok(Poly { n, d, coeffs })
    }

    /// Builds a polynomial from (α, c) terms; the degree bound is the largest |α|.
    pub fn from_terms(n: usize, terms: &[(MultiIndex, f64)]) -> Result<Self> {
        let d = terms.iter().map(|(a, _)| a.order()).max().unwrap_or(0);
        let mut p = Poly::zero(n, d);
        for (a, c) in terms {
            if a.n() != n {
                return Err(Error::DimensionMismatch { expected: n, got: a.n() });
            }
            p.coeffs[rank(a)] += c;
        }
        Ok(p)
    }

    /// The coordinate polynomial Xᵢ.
    pub fn variable(n: usize, i: usize) -> Self {
        let mut p = Poly::zero(n, 1);
        p.coeffs[1 + i] = 1.0;
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree_bound(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> f64 {
        if alpha.order() > self.d {
            return 0.0;
        }
        self.coeffs[rank(alpha)]
    }

    pub fn add_to_coeff(&mut self, alpha: &MultiIndex, c: f64) {
        self.coeffs[rank(alpha)] += c;
    }

    /// Highest degree carrying a non-zero coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        let basis = monomials(self.n, self.d);
        basis.iter().zip(&self.coeffs).filter(|(_, &c)| c != 0.0).map(|(a, _)| a.order()).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        // powers[i][k] = x_i^k
        let powers: Vec<Vec<f64>> = x
            .iter()
            .map(|&xi| {
                let mut v = Vec::with_capacity(self.d + 1);
                let mut acc = 1.0;
                for _ in 0..=self.d {
                    v.push(acc);
                    acc *= xi;
                }
                v
            })
            .collect();
        let mut sum = 0.0;
        for (alpha, &c) in monomials(self.n, self.d).iter().zip(&self.coeffs) {
            if c == 0.0 {
                continue;
            }
            let mut term = c;
            for (i, &a) in alpha.exponents().iter().enumerate() {
                term *= powers[i][a as usize];
            }
            sum += term;
        }
        Ok(sum)
    }

    /// ∂^γ P, with degree bound max(d − |γ|, 0).
    pub fn derivative(&self, gamma: &MultiIndex) -> Result<Poly> {
        if gamma.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: gamma.n() });
        }
        let k = gamma.order();
        let mut out = Poly::zero(self.n, self.d.saturating_sub(k));
        if k > self.d {
            return Ok(out);
        }
        for (alpha, &c) in monomials(self.n, self.d).iter().zip(&self.coeffs) {
            if c == 0.0 {
                continue;
            }
            if let Some(rest) = alpha.checked_sub(gamma) {
                let falling: f64 = alpha
                    .exponents()
                    .iter()
                    .zip(gamma.exponents())
                    .map(|(&a, &g)| ((a - g + 1)..=a).map(|v| v as f64).product::<f64>())
                    .product();
                out.coeffs[rank(&rest)] += c * falling;
            }
        }
        Ok(out)
    }

    /// Same polynomial viewed in ℝ_{d'}[X] for d' ≥ d.
    pub fn raise_degree(&self, d: usize) -> Poly {
        if d <= self.d {
            return self.clone();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(basis_dim(self.n, d), 0.0);
        Poly { n: self.n, d, coeffs }
    }

    /// Drops every term of degree above `d`.
    pub fn truncate(&self, d: usize) -> Poly {
        if d >= self.d {
            return self.clone();
        }
        Poly { n: self.n, d, coeffs: self.coeffs[..basis_dim(self.n, d)].to_vec() }
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly { n: self.n, d: self.d, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_n(other)?;
        let d = self.d.max(other.d);
        let mut out = self.raise_degree(d);
        for (i, c) in other.coeffs.iter().enumerate() {
            out.coeffs[i] += c;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_n(other)?;
        let mut out = Poly::zero(self.n, self.d + other.d);
        let left = monomials(self.n, self.d);
        let right = monomials(other.n, other.d);
        for (a, &ca) in left.iter().zip(&self.coeffs) {
            if ca == 0.0 {
                continue;
            }
            for (b, &cb) in right.iter().zip(&other.coeffs) {
                if cb != 0.0 {
                    out.coeffs[rank(&a.add(b))] += ca * cb;
                }
            }
        }
        Ok(out)
    }

    /// (X − x)^α expanded in the monomial basis.
    pub fn shifted_monomial(x: &[f64], alpha: &MultiIndex) -> Poly {
        let n = x.len();
        let mut acc = Poly::constant(n, 0, 1.0);
        for (i, &a) in alpha.exponents().iter().enumerate() {
            let factor = Poly::variable(n, i).sub(&Poly::constant(n, 0, x[i])).expect("same n");
            for _ in 0..a {
                acc = acc.mul(&factor).expect("same n");
            }
        }
        acc
    }

    /// Largest coefficient difference, comparing across degree bounds.
    pub fn max_abs_diff(&self, other: &Poly) -> f64 {
        let d = self.d.max(other.d);
        let a = self.raise_degree(d);
        let b = other.raise_degree(d);
        a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    fn check_n(&self, other: &Poly) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec()).unwrap()
    }

    fn sample() -> Poly {
        // 1 + 2X₁ + 3X₁X₂
        Poly::from_terms(2, &[(mi(&[0, 0]), 1.0), (mi(&[1, 0]), 2.0), (mi(&[1, 1]), 3.0)]).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(Poly::constant(2, 0, 1.0).eval(&[5.0, -3.0]).unwrap(), 1.0);
        assert_eq!(sample().eval(&[1.0, 1.0]).unwrap(), 6.0);
        let p = Poly::from_terms(2, &[(mi(&[2, 1]), 1.0)]).unwrap();
        assert_eq!(p.degree_bound(), 3);
        assert_eq!(p.eval(&[2.0, 3.0]).unwrap(), 12.0);
    }

    #[test]
    fn eval_dimension_mismatch() {
        assert_eq!(sample().eval(&[1.0]), Err(Error::DimensionMismatch { expected: 2, got: 1 }));
    }

    #[test]
    fn derivative_examples() {
        let dp = sample().derivative(&mi(&[1, 0])).unwrap();
        let want = Poly::from_terms(2, &[(mi(&[0, 0]), 2.0), (mi(&[0, 1]), 3.0)]).unwrap();
        assert!(dp.max_abs_diff(&want) == 0.0);

        let sq = Poly::from_terms(2, &[(mi(&[2, 0]), 1.0)]).unwrap();
        let z = sq.derivative(&mi(&[3, 0])).unwrap();
        assert_eq!(z.max_abs_coeff(), 0.0);

        let xy = Poly::from_terms(2, &[(mi(&[1, 1]), 1.0)]).unwrap();
        let one = xy.derivative(&mi(&[1, 1])).unwrap();
        assert!(one.max_abs_diff(&Poly::constant(2, 0, 1.0)) == 0.0);
        assert!(sample().derivative(&mi(&[1])).is_err());
    }

    #[test]
    fn shifted_monomial_expands_binomials() {
        // (X₁ − 1)²(X₂ + 2)
        let p = Poly::shifted_monomial(&[1.0, -2.0], &mi(&[2, 1]));
        for x in [[0.3, 0.7], [-1.5, 2.0], [4.0, -0.25]] {
            let want = (x[0] - 1.0f64).powi(2) * (x[1] + 2.0);
            assert!((p.eval(&x).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn product_and_degree() {
        let p = sample().mul(&Poly::variable(2, 1)).unwrap();
        assert_eq!(p.degree(), 3);
        assert_eq!(p.eval(&[2.0, 3.0]).unwrap(), (1.0 + 4.0 + 18.0) * 3.0);
        assert_eq!(Poly::zero(3, 4).degree(), 0);
    }
}
