use nalgebra::DMatrix;
use serde::Serialize;

use super::kernel::Kernel;
use crate::error::{Error, Result};
use crate::linalg::min_eigen;
use crate::polycore::{monomials, MultiIndex};

/// E[∂^α f(x)·∂^β f(y)] = (−1)^{|β|} ∂^{α+β} r(x − y).
pub fn cov_entry(kernel: &Kernel, x: &[f64], alpha: &MultiIndex, y: &[f64], beta: &MultiIndex) -> Result<f64> {
    let n = kernel.n();
    for v in [x, y] {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
    }
    if alpha.n() != n || beta.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: alpha.n().max(beta.n()) });
    }
    let order = alpha.order() + beta.order();
    let limit = 2 * kernel.max_jet();
    if order > limit {
        return Err(Error::OrderExceeded { requested: order, limit });
    }
    Ok(entry_unchecked(kernel, x, alpha, y, beta))
}

fn entry_unchecked(kernel: &Kernel, x: &[f64], alpha: &MultiIndex, y: &[f64], beta: &MultiIndex) -> f64 {
    let t: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let sign = if beta.order().is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * kernel.r_deriv(&alpha.add(beta), &t)
}

/// Row label of a [`JetCov`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JetIndex {
    pub site: usize,
    pub component: usize,
    pub alpha: MultiIndex,
}

/// Covariance of the stacked vector (∂^α fᵢ(x_j)), rows ordered by site,
/// then component, then α. Components are independent copies of one field.
#[derive(Debug, Clone)]
pub struct JetCov {
    pub sites: Vec<Vec<f64>>,
    pub alphas: Vec<MultiIndex>,
    pub components: usize,
    pub matrix: DMatrix<f64>,
}

impl JetCov {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn row(&self, site: usize, component: usize, alpha: &MultiIndex) -> Option<usize> {
        let a = self.alphas.iter().position(|b| b == alpha)?;
        (site < self.sites.len() && component < self.components)
            .then(|| (site * self.components + component) * self.alphas.len() + a)
    }

    pub fn index(&self) -> Vec<JetIndex> {
        let mut out = Vec::with_capacity(self.dim());
        for site in 0..self.sites.len() {
            for component in 0..self.components {
                for alpha in &self.alphas {
                    out.push(JetIndex { site, component, alpha: alpha.clone() });
                }
            }
        }
        out
    }
}

/// Joint covariance of all jets of order ≤ q at `sites`.
pub fn jet_covariance(kernel: &Kernel, sites: &[Vec<f64>], q: usize, components: usize) -> Result<JetCov> {
    if q > kernel.max_jet() {
        return Err(Error::OrderExceeded { requested: q, limit: kernel.max_jet() });
    }
    jet_covariance_with(kernel, sites, &monomials(kernel.n(), q), components)
}

/// Joint covariance of the derivatives `alphas` at `sites`.
pub fn jet_covariance_with(
    kernel: &Kernel,
    sites: &[Vec<f64>],
    alphas: &[MultiIndex],
    components: usize,
) -> Result<JetCov> {
    if components == 0 || alphas.is_empty() {
        return Err(Error::InvalidInput("need at least one component and one derivative".into()));
    }
    if sites.is_empty() {
        return Err(Error::EmptyPoints);
    }
    let n = kernel.n();
    let top = alphas.iter().map(MultiIndex::order).max().unwrap_or(0);
    if 2 * top > 2 * kernel.max_jet() {
        return Err(Error::OrderExceeded { requested: 2 * top, limit: 2 * kernel.max_jet() });
    }
    for s in sites {
        if s.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: s.len() });
        }
    }
    for a in alphas {
        if a.n() != n {
            return Err(Error::DimensionMismatch { expected: n, got: a.n() });
        }
    }
    let na = alphas.len();
    let scalar_dim = sites.len() * na;
    let mut scalar = DMatrix::zeros(scalar_dim, scalar_dim);
    for i in 0..scalar_dim {
        let (si, ai) = (i / na, i % na);
        for j in i..scalar_dim {
            let (sj, aj) = (j / na, j % na);
            let v = entry_unchecked(kernel, &sites[si], &alphas[ai], &sites[sj], &alphas[aj]);
            scalar[(i, j)] = v;
            scalar[(j, i)] = v;
        }
    }
    let matrix = if components == 1 {
        scalar
    } else {
        let dim = scalar_dim * components;
        DMatrix::from_fn(dim, dim, |i, j| {
            let (si, ci, ai) = (i / (components * na), (i / na) % components, i % na);
            let (sj, cj, aj) = (j / (components * na), (j / na) % components, j % na);
            if ci == cj {
                scalar[(si * na + ai, sj * na + aj)]
            } else {
                0.0
            }
        })
    };
    Ok(JetCov { sites: sites.to_vec(), alphas: alphas.to_vec(), components, matrix })
}

/// Smallest eigenvalue of the q-jet covariance at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NondegReport {
    pub order: usize,
    pub components: usize,
    pub min_eigenvalue: f64,
    pub certified: bool,
    /// Unit eigenvector of the smallest eigenvalue for the first component,
    /// indexed by the monomials of degree ≤ q.
    pub null_vector: Vec<f64>,
}

/// Certification threshold on the smallest eigenvalue.
pub const NONDEG_THRESHOLD: f64 = 1e-8;

/// Stationary kernels only need checking at the origin.
pub fn nondegeneracy_check(kernel: &Kernel, q: usize, components: usize) -> Result<NondegReport> {
    let jc = jet_covariance(kernel, &[vec![0.0; kernel.n()]], q, 1)?;
    let (min_eigenvalue, mut v) = min_eigen(&jc.matrix);
    // fix the sign so that the largest entry is positive
    let lead = v.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    if lead < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(NondegReport {
        order: q,
        components,
        min_eigenvalue,
        certified: min_eigenvalue > NONDEG_THRESHOLD,
        null_vector: v,
    })
}
