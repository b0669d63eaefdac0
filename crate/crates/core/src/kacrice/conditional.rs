use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gaussfield::JetCov;
use crate::linalg::{asymmetry, min_eigen};

/// Below this reciprocal condition number of the value covariance,
/// conditioning on the values is refused.
pub const RCOND_FLOOR: f64 = 1e-12;

/// Centered Gaussian law of the non-value rows of a [`JetCov`] given that
/// the value rows vanish.
#[derive(Debug, Clone)]
pub struct CondGaussian {
    /// Rows of the jet covariance kept, in order.
    pub rows: Vec<usize>,
    pub covariance: DMatrix<f64>,
    /// Covariance of the conditioned (value) block.
    pub value_covariance: DMatrix<f64>,
    /// λ_min / λ_max of the value covariance.
    pub rcond: f64,
}

/// Reciprocal condition number λ_min/λ_max of a symmetric PSD matrix.
pub fn rcond_sym(m: &DMatrix<f64>) -> f64 {
    let eig = m.clone().symmetric_eigenvalues();
    let hi = eig.iter().copied().fold(0.0, f64::max);
    let lo = eig.iter().copied().fold(f64::INFINITY, f64::min);
    if hi <= 0.0 {
        0.0
    } else {
        lo / hi
    }
}

/// Schur complement Σ_dd − Σ_dv Σ_vv⁻¹ Σ_vd.
pub fn conditional_gaussian(jc: &JetCov, value_rows: &[usize]) -> Result<CondGaussian> {
    conditional_from_matrix(&jc.matrix, value_rows)
}

pub(crate) fn conditional_from_matrix(m: &DMatrix<f64>, value_rows: &[usize]) -> Result<CondGaussian> {
    let dim = m.nrows();
    if let Some(&bad) = value_rows.iter().find(|&&r| r >= dim) {
        return Err(Error::InvalidInput(format!("value row {bad} out of range {dim}")));
    }
    let rows: Vec<usize> = (0..dim).filter(|r| !value_rows.contains(r)).collect();
    let pick = |a: &[usize], b: &[usize]| DMatrix::from_fn(a.len(), b.len(), |i, j| m[(a[i], b[j])]);
    let svv = pick(value_rows, value_rows);
    let svd = pick(value_rows, &rows);
    let sdd = pick(&rows, &rows);
    let rcond = rcond_sym(&svv);
    if !(rcond >= RCOND_FLOOR) {
        return Err(Error::DegenerateConditioning { rcond });
    }
    let chol = svv.clone().cholesky().ok_or(Error::DegenerateConditioning { rcond })?;
    let x = chol.solve(&svd);
    let c = sdd - svd.transpose() * x;
    let covariance = (&c + c.transpose()) * 0.5;
    Ok(CondGaussian { rows, covariance, value_covariance: svv, rcond })
}

impl CondGaussian {
    pub fn is_psd(&self, tol: f64) -> bool {
        self.covariance.nrows() == 0 || (asymmetry(&self.covariance) <= tol && min_eigen(&self.covariance).0 >= -tol)
    }
}

/// Square-root factor F with F Fᵀ = C for a PSD matrix: Cholesky when it
/// succeeds, otherwise eigenvectors scaled by √max(λ, 0).
pub fn psd_factor(c: &DMatrix<f64>) -> DMatrix<f64> {
    if let Some(ch) = c.clone().cholesky() {
        return ch.l();
    }
    let eig = nalgebra::SymmetricEigen::new(c.clone());
    let mut f = eig.eigenvectors.clone();
    for (j, lambda) in eig.eigenvalues.iter().enumerate() {
        let s = lambda.max(0.0).sqrt();
        f.column_mut(j).scale_mut(s);
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussfield::{jet_covariance, Kernel};

    #[test]
    fn independent_blocks_are_unchanged() {
        let jc = jet_covariance(&Kernel::bargmann_fock(2), &[vec![0.0, 0.0]], 1, 1).unwrap();
        let c = conditional_gaussian(&jc, &[0]).unwrap();
        assert_eq!(c.covariance, DMatrix::identity(2, 2));
        assert_eq!(c.rows, vec![1, 2]);
    }

    #[test]
    fn scalar_regression() {
        let rho = 0.6;
        let m = DMatrix::from_row_slice(2, 2, &[1.0, rho, rho, 1.0]);
        let c = conditional_from_matrix(&m, &[0]).unwrap();
        assert!((c.covariance[(0, 0)] - (1.0 - rho * rho)).abs() < 1e-15);
    }

    #[test]
    fn singular_value_block_is_refused() {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        assert!(matches!(conditional_from_matrix(&m, &[0, 1]), Err(Error::DegenerateConditioning { .. })));
    }

    #[test]
    fn factor_of_singular_psd() {
        let c = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let f = psd_factor(&c);
        assert!((&f * f.transpose() - c).abs().max() < 1e-14);
    }
}
