use nalgebra::DMatrix;

use crate::configspace::Subspace;
use crate::error::{Error, Result};

/// Jac L = det(L Lᵀ)^{1/2} for an r × n matrix with r ≤ n.
pub fn jacobian(l: &DMatrix<f64>) -> Result<f64> {
    let (r, n) = l.shape();
    if r > n {
        return Err(Error::ShapeMismatch(format!("Jacobian needs r ≤ n, got {r} × {n}")));
    }
    Ok(jacobian_unchecked(l))
}

pub(crate) fn jacobian_unchecked(l: &DMatrix<f64>) -> f64 {
    let (r, n) = l.shape();
    if r == n {
        l.determinant().abs()
    } else if r == 1 {
        l.norm()
    } else {
        gram_root(&l.transpose())
    }
}

/// det(AᵀA)^{1/2} for a tall A, as ∏|Rᵢᵢ| from a QR factorization; forming
/// AᵀA first would square the condition number.
fn gram_root(a: &DMatrix<f64>) -> f64 {
    a.clone().qr().r().diagonal().iter().map(|d| d.abs()).product()
}

fn spd_cholesky(g: &DMatrix<f64>) -> Result<nalgebra::Cholesky<f64, nalgebra::Dyn>> {
    if !g.is_square() || crate::linalg::asymmetry(g) > 1e-12 * g.abs().max().max(1.0) {
        return Err(Error::NotSpd);
    }
    g.clone().cholesky().ok_or(Error::NotSpd)
}

/// γ(g) = det(g)^{1/2}, the Riemannian volume density.
pub fn volume_density(g: &DMatrix<f64>) -> Result<f64> {
    let c = spd_cholesky(g)?;
    Ok(c.l().diagonal().product())
}

/// det(g|_G)^{1/2}, with g restricted to G through an orthonormal basis of G.
pub fn gamma_r(g: &DMatrix<f64>, subspace: &Subspace) -> Result<f64> {
    let c = spd_cholesky(g)?;
    if subspace.ambient_dim() != g.nrows() {
        return Err(Error::DimensionMismatch { expected: g.nrows(), got: subspace.ambient_dim() });
    }
    if subspace.dim() == 0 {
        return Ok(1.0);
    }
    // Bᵀ g B = (LᵀB)ᵀ(LᵀB) with g = L Lᵀ
    Ok(gram_root(&(c.l().transpose() * subspace.basis())))
}

/// Jacobian of L : (ℝⁿ, g) → (ℝʳ, Euclidean), det(L g⁻¹ Lᵀ)^{1/2}.
pub fn jacobian_g(l: &DMatrix<f64>, g: &DMatrix<f64>) -> Result<f64> {
    let (r, n) = l.shape();
    if r > n {
        return Err(Error::ShapeMismatch(format!("Jacobian needs r ≤ n, got {r} × {n}")));
    }
    if g.nrows() != n {
        return Err(Error::DimensionMismatch { expected: n, got: g.nrows() });
    }
    // L g⁻¹ Lᵀ = MᵀM with M = C⁻¹Lᵀ, g = C Cᵀ
    let c = spd_cholesky(g)?;
    let m = c.l().solve_lower_triangular(&l.transpose()).expect("Cholesky factor is invertible");
    Ok(gram_root(&m))
}

/// A Riemannian metric x ↦ g(x) on a Euclidean domain.
type MetricFn = Box<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;

pub struct MetricField {
    n: usize,
    g: MetricFn,
}

impl MetricField {
    pub fn new(n: usize, g: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static) -> Self {
        MetricField { n, g: Box::new(g) }
    }

    pub fn euclidean(n: usize) -> Self {
        Self::new(n, move |_| DMatrix::identity(n, n))
    }

    /// g(x), checked symmetric positive definite.
    pub fn at(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        let g = (self.g)(x);
        if g.shape() != (self.n, self.n) {
            return Err(Error::ShapeMismatch(format!("metric is {:?}, expected {n}×{n}", g.shape(), n = self.n)));
        }
        spd_cholesky(&g)?;
        Ok(g)
    }
}

/// E χ_k = √2 Γ((k+1)/2) / Γ(k/2), via E χ_k · E χ_{k+1} = k.
pub fn chi_mean(k: usize) -> f64 {
    let mut m = (2.0 / std::f64::consts::PI).sqrt();
    for j in 1..k {
        m = j as f64 / m;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobian_examples() {
        assert_eq!(jacobian(&DMatrix::identity(3, 3)).unwrap(), 1.0);
        assert_eq!(jacobian(&DMatrix::from_row_slice(1, 2, &[3.0, 4.0])).unwrap(), 5.0);
        assert_eq!(jacobian(&DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0])).unwrap(), 0.0);
        // rank one: zero up to round-off on the scale ‖L‖² = 70
        assert!(jacobian(&DMatrix::from_row_slice(2, 3, &[1., 2., 3., 2., 4., 6.])).unwrap() < 70.0 * 1e-15);
        assert!(jacobian(&DMatrix::zeros(3, 2)).is_err());
    }

    #[test]
    fn gamma_examples() {
        let e1 = Subspace::span(&DMatrix::from_column_slice(2, 1, &[1.0, 0.0]));
        assert_eq!(gamma_r(&DMatrix::identity(2, 2), &e1).unwrap(), 1.0);
        assert_eq!(gamma_r(&DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![4.0, 9.0])), &e1).unwrap(), 2.0);
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert_eq!(gamma_r(&bad, &e1), Err(Error::NotSpd));
    }

    #[test]
    fn chi_means() {
        // E χ₁ = √(2/π), E χ₂ = √(π/2), E χ₃ = 2√(2/π)
        let pi = std::f64::consts::PI;
        assert!((chi_mean(1) - (2.0 / pi).sqrt()).abs() < 1e-15);
        assert!((chi_mean(2) - (pi / 2.0).sqrt()).abs() < 1e-15);
        assert!((chi_mean(3) - 2.0 * (2.0 / pi).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn metric_field_checks() {
        let m = MetricField::euclidean(2);
        assert!(m.at(&[0.0, 1.0]).is_ok());
        assert!(m.at(&[0.0]).is_err());
        let bad = MetricField::new(2, |_| DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]));
        assert_eq!(bad.at(&[0.0, 0.0]), Err(Error::NotSpd));
    }
}
