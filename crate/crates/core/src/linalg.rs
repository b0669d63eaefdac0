//! Dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, SymmetricEigen};

/// Right null space from a full SVD, rank tolerance max(rows, cols)·ε·σ_max.
#[derive(Debug, Clone)]
pub struct NullSpace {
    /// Orthonormal columns spanning the numerical kernel.
    pub basis: DMatrix<f64>,
    pub rank: usize,
    /// Singular values in decreasing order (length = number of columns).
    pub singular_values: Vec<f64>,
}

/// Numerical kernel of `a`.
pub fn null_space(a: &DMatrix<f64>) -> NullSpace {
    let (m, n) = a.shape();
    if n == 0 {
        return NullSpace { basis: DMatrix::zeros(0, 0), rank: 0, singular_values: vec![] };
    }
    let rows = m.max(n);
    let mut padded = DMatrix::zeros(rows, n);
    padded.view_mut((0, 0), (m, n)).copy_from(a);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let smax = singular_values[0];
    let tol = rows as f64 * f64::EPSILON * smax;
    let rank = singular_values.iter().filter(|&&s| s > tol).count();
    let mut basis = DMatrix::zeros(n, n - rank);
    for (c, &i) in order[rank..].iter().enumerate() {
        basis.set_column(c, &v_t.row(i).transpose());
    }
    NullSpace { basis, rank, singular_values }
}

/// Singular values of `a`, decreasing.
pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return vec![];
    }
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Smallest eigenvalue of a symmetric matrix and a unit eigenvector for it.
pub fn min_eigen(a: &DMatrix<f64>) -> (f64, Vec<f64>) {
    let eig = SymmetricEigen::new(a.clone());
    let (i, &v) = eig.eigenvalues.iter().enumerate().min_by(|x, y| x.1.total_cmp(y.1)).expect("non-empty matrix");
    (v, eig.eigenvectors.column(i).iter().copied().collect())
}

/// max |a_ij − a_ji|.
pub fn asymmetry(a: &DMatrix<f64>) -> f64 {
    (a - a.transpose()).abs().max()
}

/// Cholesky factor of `a + jitter·I` with jitter = rel·trace/N, or the
/// smallest eigenvalue of `a` when that still fails.
pub fn jittered_cholesky(a: &DMatrix<f64>, rel: f64) -> Result<DMatrix<f64>, f64> {
    let n = a.nrows();
    let jitter = if n == 0 { 0.0 } else { rel * a.trace() / n as f64 };
    let mut b = a.clone();
    for i in 0..n {
        b[(i, i)] += jitter;
    }
    match b.cholesky() {
        Some(c) => Ok(c.l()),
        None => Err(min_eigen(a).0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_wide_matrix() {
        let a = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let ns = null_space(&a);
        assert_eq!(ns.rank, 2);
        assert_eq!(ns.basis.ncols(), 1);
        assert!((&a * &ns.basis).abs().max() < 1e-14);
        assert!(((ns.basis.transpose() * &ns.basis)[(0, 0)] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn null_space_detects_rank_drop() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert_eq!(null_space(&a).rank, 1);
        assert_eq!(null_space(&DMatrix::zeros(2, 3)).rank, 0);
    }

    #[test]
    fn cholesky_with_jitter() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let l = jittered_cholesky(&a, 1e-12).unwrap();
        assert!((&l * l.transpose() - &a).abs().max() < 1e-11);
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert_eq!(jittered_cholesky(&bad, 1e-12), Err(-1.0));
    }
}
