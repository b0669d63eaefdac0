use serde::{Deserialize, Serialize};

use super::multiindex::{homogeneous, rank_homogeneous, MultiIndex};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Symmetric k-linear form on ℝⁿ.
///
/// Storage is one coefficient per orbit: `coeffs[α]` (|α| = k) is the tensor
/// entry S(e_{i₁},…,e_{i_k}) for any index tuple with multiplicities α. The
/// orbit of α holds k!/α! tuples, so S(v,…,v) = Σ_α (k!/α!)·c_α·v^α. With this
/// convention the k-th differential D^k_x f has c_α = ∂^α f(x).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymForm {
    n: usize,
    k: usize,
    coeffs: Vec<f64>,
}

/// An n-vector of polynomials of degree ≤ 1, e.g. X − x.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineVec(pub Vec<Poly>);

impl AffineVec {
    /// X − x in ℝⁿ.
    pub fn x_minus(x: &[f64]) -> Self {
        let n = x.len();
        AffineVec(
            (0..n)
                .map(|i| {
                    let mut p = Poly::variable(n, i);
                    p.add_to_coeff(&MultiIndex::zero(n), -x[i]);
                    p
                })
                .collect(),
        )
    }

    /// Constant vector v, as polynomials in `ambient` variables.
    pub fn constant(v: &[f64], ambient: usize) -> Self {
        AffineVec(v.iter().map(|&c| Poly::constant(ambient, 0, c)).collect())
    }
}

fn canonical_order(a: &AffineVec, b: &AffineVec) -> std::cmp::Ordering {
    let key = |v: &AffineVec| -> Vec<f64> {
        v.0.iter().flat_map(|p| p.truncate(1).raise_degree(1).coeffs().to_vec()).collect()
    };
    let (ka, kb) = (key(a), key(b));
    ka.iter().zip(&kb).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(ka.len().cmp(&kb.len()))
}

// Above this order, application switches from full expansion (n^k tuples)
// to the polarization identity (2^(k-1) terms).
const EXPANSION_MAX_ORDER: usize = 4;

impl SymForm {
    pub fn zero(n: usize, k: usize) -> Self {
        SymForm { n, k, coeffs: vec![0.0; homogeneous(n, k).len()] }
    }

    /// Order-0 form, i.e. a scalar.
    pub fn scalar(n: usize, c: f64) -> Self {
        SymForm { n, k: 0, coeffs: vec![c] }
    }

    pub fn from_coeffs(n: usize, k: usize, coeffs: Vec<f64>) -> Result<Self> {
        let want = homogeneous(n, k).len();
        if coeffs.len() != want {
            return Err(Error::DimensionMismatch { expected: want, got: coeffs.len() });
        }
        Ok(SymForm { n, k, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.k
    }

    /// Coefficients ordered as [`homogeneous`]`(n, k)`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn entry(&self, alpha: &MultiIndex) -> f64 {
        self.coeffs[rank_homogeneous(alpha)]
    }

    pub fn set_entry(&mut self, alpha: &MultiIndex, c: f64) {
        self.coeffs[rank_homogeneous(alpha)] = c;
    }

    pub fn scale(&self, s: f64) -> SymForm {
        SymForm { n: self.n, k: self.k, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn max_abs_diff(&self, other: &SymForm) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// S(v,…,v) = Σ_α (k!/α!)·c_α·v^α.
    pub fn homogeneous_value(&self, v: &[f64]) -> f64 {
        homogeneous(self.n, self.k).iter().zip(&self.coeffs).map(|(a, c)| a.multinomial() * c * a.monomial(v)).sum()
    }

    /// Multilinear application to k numeric vectors.
    pub fn apply_vectors(&self, args: &[&[f64]]) -> Result<f64> {
        if args.len() != self.k {
            return Err(Error::ArityMismatch { expected: self.k, got: args.len() });
        }
        let mut total = 0.0;
        for_each_tuple(self.n, self.k, |tuple| {
            let mut term = self.entry(&MultiIndex::from_slots(self.n, tuple));
            for (arg, &i) in args.iter().zip(tuple) {
                term *= arg[i];
            }
            total += term;
        });
        Ok(total)
    }

    /// S(a₁,…,a_k) for affine polynomial vectors a_j, expanded into a polynomial.
    pub fn apply(&self, args: &[AffineVec]) -> Result<Poly> {
        if args.len() != self.k {
            return Err(Error::ArityMismatch { expected: self.k, got: args.len() });
        }
        let ambient = self.check_args(args)?;
        if self.k == 0 {
            return Ok(Poly::constant(ambient, 0, self.coeffs[0]));
        }
        // a fixed argument order makes permuted calls round identically
        let mut sorted = args.to_vec();
        sorted.sort_by(canonical_order);
        if self.k <= EXPANSION_MAX_ORDER {
            self.apply_expanded(&sorted, ambient)
        } else {
            self.apply_polarized(&sorted, ambient)
        }
    }

    fn check_args(&self, args: &[AffineVec]) -> Result<usize> {
        let mut ambient = None;
        for a in args {
            if a.0.len() != self.n {
                return Err(Error::DimensionMismatch { expected: self.n, got: a.0.len() });
            }
            for p in &a.0 {
                if p.degree() > 1 {
                    return Err(Error::NotAffine { degree: p.degree() });
                }
                match ambient {
                    None => ambient = Some(p.n()),
                    Some(m) if m != p.n() => return Err(Error::DimensionMismatch { expected: m, got: p.n() }),
                    _ => {}
                }
            }
        }
        Ok(ambient.unwrap_or(self.n))
    }

    fn apply_expanded(&self, args: &[AffineVec], ambient: usize) -> Result<Poly> {
        let mut out = Poly::zero(ambient, self.k);
        let mut err = None;
        for_each_tuple(self.n, self.k, |tuple| {
            if err.is_some() {
                return;
            }
            let c = self.entry(&MultiIndex::from_slots(self.n, tuple));
            if c == 0.0 {
                return;
            }
            let mut term = Poly::constant(ambient, 0, c);
            for (arg, &i) in args.iter().zip(tuple) {
                term = term.mul(&arg.0[i].truncate(1)).expect("checked ambient");
            }
            match out.add(&term) {
                Ok(p) => out = p,
                Err(e) => err = Some(e),
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(out.truncate(self.k)),
        }
    }

    fn apply_polarized(&self, args: &[AffineVec], ambient: usize) -> Result<Poly> {
        // S(a₁..a_k) = 2/(k!·2^k) Σ_{ε₁=+1, ε_j=±1} (Π ε_j) q(Σ ε_j a_j)
        let k = self.k;
        let mut out = Poly::zero(ambient, k);
        let norm = 2.0 / (super::multiindex::factorial(k) * 2f64.powi(k as i32));
        for mask in 0u64..(1u64 << (k - 1)) {
            let mut sign = 1.0;
            let mut v: Vec<Poly> = args[0].0.iter().map(|p| p.truncate(1)).collect();
            for (j, arg) in args.iter().enumerate().skip(1) {
                let s = if mask >> (j - 1) & 1 == 1 { -1.0 } else { 1.0 };
                sign *= s;
                for (vi, aj) in v.iter_mut().zip(&arg.0) {
                    *vi = vi.add(&aj.truncate(1).scale(s))?;
                }
            }
            let q = self.homogeneous_poly(&v, ambient)?;
            out = out.add(&q.scale(sign * norm))?;
        }
        Ok(out.truncate(k))
    }

    /// q(v) = Σ_α (k!/α!) c_α v^α for a vector of polynomials v.
    fn homogeneous_poly(&self, v: &[Poly], ambient: usize) -> Result<Poly> {
        // powers[i][e] = v_i^e
        let mut powers: Vec<Vec<Poly>> = Vec::with_capacity(self.n);
        for vi in v {
            let mut row = vec![Poly::constant(ambient, 0, 1.0)];
            for e in 1..=self.k {
                let next = row[e - 1].mul(vi)?;
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = Poly::zero(ambient, self.k);
        for (alpha, &c) in homogeneous(self.n, self.k).iter().zip(&self.coeffs) {
            if c == 0.0 {
                continue;
            }
            let mut term = Poly::constant(ambient, 0, alpha.multinomial() * c);
            for (i, &a) in alpha.exponents().iter().enumerate() {
                term = term.mul(&powers[i][a as usize])?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }
}

fn for_each_tuple(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut tuple = vec![0usize; k];
    loop {
        f(&tuple);
        let mut pos = 0;
        loop {
            if pos == k {
                return;
            }
            tuple[pos] += 1;
            if tuple[pos] < n {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec()).unwrap()
    }

    #[test]
    fn scalar_form_gives_constant() {
        let p = SymForm::scalar(2, 3.5).apply(&[]).unwrap();
        assert_eq!(p.coeffs(), &[3.5]);
    }

    #[test]
    fn linear_form_on_x() {
        let l = SymForm::from_coeffs(2, 1, vec![0.5, 0.5]).unwrap();
        let p = l.apply(&[AffineVec::x_minus(&[0.0, 0.0])]).unwrap();
        let want = Poly::from_terms(2, &[(mi(&[1, 0]), 0.5), (mi(&[0, 1]), 0.5)]).unwrap();
        assert_eq!(p.max_abs_diff(&want), 0.0);
    }

    #[test]
    fn bilinear_example_matches_polarization_oracle() {
        // S(v,v) = v₁v₂  ⇒  entry at (1,1) is 1/2.
        let mut s = SymForm::zero(2, 2);
        s.set_entry(&mi(&[1, 1]), 0.5);
        let args = [AffineVec::x_minus(&[0.0, 0.0]), AffineVec::x_minus(&[1.0, 0.0])];
        let p = s.apply(&args).unwrap();
        // X₁X₂ − X₂/2
        let want = Poly::from_terms(2, &[(mi(&[1, 1]), 1.0), (mi(&[0, 1]), -0.5)]).unwrap();
        assert!(p.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn arity_and_affinity_errors() {
        let s = SymForm::zero(2, 2);
        assert_eq!(s.apply(&[AffineVec::x_minus(&[0.0, 0.0])]), Err(Error::ArityMismatch { expected: 2, got: 1 }));
        let quad = Poly::from_terms(2, &[(mi(&[2, 0]), 1.0)]).unwrap();
        let bad = AffineVec(vec![quad.clone(), quad]);
        assert!(matches!(s.apply(&[bad.clone(), bad]), Err(Error::NotAffine { degree: 2 })));
    }

    #[test]
    fn polarized_and_expanded_paths_agree() {
        // order-5 form on ℝ² with arbitrary entries
        let coeffs: Vec<f64> = (0..6).map(|i| 0.3 * i as f64 - 0.7).collect();
        let s = SymForm::from_coeffs(2, 5, coeffs).unwrap();
        let pts = [[0.1, 0.2], [-0.4, 1.0], [2.0, -1.0], [0.0, 0.5], [1.5, 1.5]];
        let args: Vec<AffineVec> = pts.iter().map(|x| AffineVec::x_minus(x)).collect();
        let polar = s.apply(&args).unwrap();
        let direct = s.apply_expanded(&args, 2).unwrap();
        assert!(polar.max_abs_diff(&direct) < 1e-11);
    }

    #[test]
    fn numeric_application_is_multilinear() {
        let s = SymForm::from_coeffs(3, 2, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let u = [1.0, -2.0, 0.5];
        let w = [0.3, 0.1, -1.0];
        let a = s.apply_vectors(&[&u, &w]).unwrap();
        let b = s.apply_vectors(&[&w, &u]).unwrap();
        assert!((a - b).abs() < 1e-14);
        assert!((s.apply_vectors(&[&u, &u]).unwrap() - s.homogeneous_value(&u)).abs() < 1e-13);
    }
}
