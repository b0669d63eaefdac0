use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{null_space, singular_values};

/// A codimension-k subspace of ℝᴺ, held by an orthonormal basis (N × (N−k)).
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: DMatrix<f64>,
}

impl Subspace {
    /// Checks that the columns are orthonormal to 1e−10.
    pub fn new(basis: DMatrix<f64>) -> Result<Self> {
        let m = basis.ncols();
        let gram = basis.transpose() * &basis;
        let err = (gram - DMatrix::<f64>::identity(m, m)).abs().max();
        if m > 0 && err > 1e-10 {
            return Err(Error::InvalidInput(format!("basis not orthonormal (error {err:e})")));
        }
        Ok(Subspace { basis })
    }

    /// Orthonormalizes the column span of `m` (numerical rank decides the dimension).
    pub fn span(m: &DMatrix<f64>) -> Self {
        let complement = null_space(&m.transpose()).basis;
        Subspace { basis: null_space(&complement.transpose()).basis }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { basis: DMatrix::zeros(ambient, 0) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim() - self.dim()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Orthogonal complement.
    pub fn complement(&self) -> Subspace {
        if self.dim() == 0 {
            let n = self.ambient_dim();
            return Subspace { basis: DMatrix::identity(n, n) };
        }
        Subspace { basis: null_space(&self.basis.transpose()).basis }
    }

    /// ‖(I − P_self)·B‖₂ for the basis B of `other`; zero iff other ⊂ self.
    pub fn containment_residual(&self, other: &Subspace) -> Result<f64> {
        if other.ambient_dim() != self.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), got: other.ambient_dim() });
        }
        if other.dim() == 0 {
            return Ok(0.0);
        }
        let r = &other.basis - &self.basis * (self.basis.transpose() * &other.basis);
        Ok(singular_values(&r).first().copied().unwrap_or(0.0))
    }

    /// Row-major basis, for serialization.
    pub fn basis_rows(&self) -> Vec<Vec<f64>> {
        self.basis.row_iter().map(|r| r.iter().copied().collect()).collect()
    }
}

/// Largest principal angle between two subspaces of equal ambient dimension
/// and codimension, computed as atan2(σ_max((I − AAᵀ)B), σ_min(AᵀB)).
pub fn subspace_angle(a: &Subspace, b: &Subspace) -> Result<f64> {
    if a.ambient_dim() != b.ambient_dim() || a.codim() != b.codim() {
        return Err(Error::ShapeMismatch(format!(
            "Gr: ambient {} codim {} vs ambient {} codim {}",
            a.ambient_dim(),
            a.codim(),
            b.ambient_dim(),
            b.codim()
        )));
    }
    if a.dim() == 0 {
        return Ok(0.0);
    }
    let cross = a.basis.transpose() * &b.basis;
    let cos = singular_values(&cross).last().copied().unwrap_or(0.0);
    let sin = a.containment_residual(b)?;
    Ok(sin.atan2(cos))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn line(v: &[f64]) -> Subspace {
        Subspace::span(&DMatrix::from_column_slice(v.len(), 1, v))
    }

    #[test]
    fn angle_examples() {
        let a = line(&[1.0, 0.0]);
        assert_eq!(subspace_angle(&a, &a).unwrap(), 0.0);
        assert!((subspace_angle(&a, &line(&[0.0, 1.0])).unwrap() - FRAC_PI_2).abs() < 1e-15);
        for eps in [1e-1f64, 1e-4, 1e-8] {
            let tilted = line(&[0.0, eps.sin(), -eps.cos()]);
            let x2 = line(&[0.0, 0.0, 1.0]);
            let got = subspace_angle(&tilted, &x2).unwrap();
            assert!((got - eps).abs() < 1e-14, "{eps}: {got}");
        }
    }

    #[test]
    fn angle_shape_mismatch() {
        let a = line(&[1.0, 0.0]);
        let b = line(&[1.0, 0.0, 0.0]);
        assert!(matches!(subspace_angle(&a, &b), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn complement_and_containment() {
        let s = Subspace::span(&DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 1.0, 1.0, 0.0, 1.0]));
        assert_eq!((s.dim(), s.codim()), (2, 1));
        let c = s.complement();
        assert_eq!(c.dim(), 1);
        assert!((s.basis().transpose() * c.basis()).abs().max() < 1e-14);
        assert!(s.containment_residual(&line(&[1.0, 2.0, 1.0])).unwrap() < 1e-14);
        assert!(s.containment_residual(&c).unwrap() > 0.99);
    }
}
