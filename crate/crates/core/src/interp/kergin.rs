use nalgebra::DMatrix;

use super::divdiff::divided_difference;
use super::oracle::FnOracle;
use crate::error::{Error, Result};
use crate::polycore::{basis_dim, monomials, AffineVec, Poly, SymForm};

/// Kergin interpolant K(f, x̄) = Σ_{k=1}^{p} f[x₁,…,x_k](X−x₁,…,X−x_{k−1}),
/// the unique P ∈ ℝ_{p−1}[X] with P[x̄_I] = f[x̄_I] for every non-empty I.
pub fn kergin(f: &dyn FnOracle, points: &[Vec<f64>]) -> Result<Poly> {
    if points.is_empty() {
        return Err(Error::EmptyPoints);
    }
    let p = points.len();
    if f.smoothness() < p - 1 {
        return Err(Error::InsufficientSmoothness { needed: p - 1, available: f.smoothness() });
    }
    let forms = (1..=p).map(|k| divided_difference(f, &points[..k])).collect::<Result<Vec<_>>>()?;
    newton_reconstruct(&forms, &points[..p - 1], f.n())
}

/// (S_j)_{0≤j<p} ↦ Σ_j S_j(X−x₁,…,X−x_j), inverse of [`newton_forms`].
///
/// `anchors` must hold at least p−1 points; `n` is the ambient dimension.
pub fn newton_reconstruct(forms: &[SymForm], anchors: &[Vec<f64>], n: usize) -> Result<Poly> {
    let p = forms.len();
    if p == 0 {
        return Ok(Poly::zero(n, 0));
    }
    if anchors.len() + 1 < p {
        return Err(Error::ShapeMismatch(format!("{} forms need {} anchor points, got {}", p, p - 1, anchors.len())));
    }
    let shifts: Vec<AffineVec> = anchors.iter().map(|x| AffineVec::x_minus(x)).collect();
    let mut out = Poly::zero(n, p - 1);
    for (j, s) in forms.iter().enumerate() {
        if s.order() != j {
            return Err(Error::ShapeMismatch(format!("form {j} has order {}", s.order())));
        }
        if s.n() != n {
            return Err(Error::DimensionMismatch { expected: n, got: s.n() });
        }
        let term = s.apply(&shifts[..j])?;
        out = out.add(&term)?;
    }
    Ok(out.truncate(p - 1))
}

/// P ↦ (P[x₁,…,x_j])_{1≤j≤p}.
pub fn newton_forms(f: &dyn FnOracle, points: &[Vec<f64>]) -> Result<Vec<SymForm>> {
    (1..=points.len()).map(|k| divided_difference(f, &points[..k])).collect()
}

/// Matrix of P ↦ K(P, x̄) from ℝ_{source_degree}[X] to ℝ_{p−1}[X], columns
/// indexed by the graded-lex monomial basis.
pub fn kergin_matrix(points: &[Vec<f64>], source_degree: usize) -> Result<DMatrix<f64>> {
    if points.is_empty() {
        return Err(Error::EmptyPoints);
    }
    let n = points[0].len();
    let p = points.len();
    let rows = basis_dim(n, p - 1);
    let basis = monomials(n, source_degree);
    let mut m = DMatrix::zeros(rows, basis.len());
    for (col, alpha) in basis.iter().enumerate() {
        let mono = Poly::from_terms(n, &[(alpha.clone(), 1.0)])?;
        let k = kergin(&mono, points)?;
        for (row, c) in k.raise_degree(p - 1).coeffs().iter().enumerate() {
            m[(row, col)] = *c;
        }
    }
    Ok(m)
}
