use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::jetcov::{jet_covariance_with, JetCov};
use super::kernel::Kernel;
use crate::error::{Error, Result};
use crate::linalg::jittered_cholesky;
use crate::polycore::MultiIndex;
use crate::rng::{stream, Domain};

/// Relative diagonal jitter added once before factorization.
pub const JITTER: f64 = 1e-12;

/// Draws exact joint Gaussian jets from a fixed covariance.
#[derive(Debug, Clone)]
pub struct Sampler {
    jc: JetCov,
    factor: DMatrix<f64>,
}

impl Sampler {
    pub fn new(kernel: &Kernel, sites: &[Vec<f64>], alphas: &[MultiIndex], components: usize) -> Result<Self> {
        Self::from_jetcov(jet_covariance_with(kernel, sites, alphas, components)?)
    }

    pub fn from_jetcov(jc: JetCov) -> Result<Self> {
        let factor = jittered_cholesky(&jc.matrix, JITTER).map_err(|min_eig| Error::NotPsd { min_eig })?;
        Ok(Sampler { jc, factor })
    }

    pub fn jetcov(&self) -> &JetCov {
        &self.jc
    }

    pub fn dim(&self) -> usize {
        self.factor.nrows()
    }

    /// Lower-triangular L with L Lᵀ = covariance + jitter.
    pub fn factor(&self) -> &DMatrix<f64> {
        &self.factor
    }

    pub fn draw<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let z = DVector::from_iterator(self.dim(), (0..self.dim()).map(|_| rng.sample::<f64, _>(StandardNormal)));
        (&self.factor * z).iter().copied().collect()
    }
}

/// One realization of chosen derivatives of a field at a list of sites.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    pub sites: Vec<Vec<f64>>,
    pub alphas: Vec<MultiIndex>,
    pub components: usize,
    /// Laid out like the rows of [`JetCov`].
    pub values: Vec<f64>,
    pub seed: u64,
}

impl FieldSample {
    pub fn get(&self, site: usize, component: usize, alpha: &MultiIndex) -> Option<f64> {
        let a = self.alphas.iter().position(|b| b == alpha)?;
        let row = (site * self.components + component) * self.alphas.len() + a;
        self.values.get(row).copied()
    }
}

/// Seeded draw of (∂^α fᵢ(x)) for x in `sites`, α in `alphas`, i < components.
pub fn sample_field(
    kernel: &Kernel,
    sites: &[Vec<f64>],
    alphas: &[MultiIndex],
    components: usize,
    seed: u64,
) -> Result<FieldSample> {
    let sampler = Sampler::new(kernel, sites, alphas, components)?;
    let values = sampler.draw(&mut stream(seed, Domain::Field, 0));
    Ok(FieldSample { sites: sites.to_vec(), alphas: alphas.to_vec(), components, values, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::mean_se;

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec()).unwrap()
    }

    #[test]
    fn same_seed_same_sample() {
        let k = Kernel::bargmann_fock(2);
        let sites = vec![vec![0.0, 0.0], vec![0.5, 0.1]];
        let alphas = vec![mi(&[0, 0]), mi(&[1, 0])];
        let a = sample_field(&k, &sites, &alphas, 2, 42).unwrap();
        let b = sample_field(&k, &sites, &alphas, 2, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.values, sample_field(&k, &sites, &alphas, 2, 43).unwrap().values);
    }

    #[test]
    fn moments_match_kernel() {
        let k = Kernel::bargmann_fock(1);
        let s = Sampler::new(&k, &[vec![0.0], vec![1.0]], &[mi(&[0]), mi(&[1])], 1).unwrap();
        let mut rng = stream(9, Domain::Field, 0);
        let m = 100_000;
        let draws: Vec<Vec<f64>> = (0..m).map(|_| s.draw(&mut rng)).collect();
        let sq: Vec<f64> = draws.iter().map(|d| d[0] * d[0]).collect();
        let var = mean_se(&sq);
        assert!((var.value - 1.0).abs() < 3.0 * var.std_error, "{var:?}");
        // E[f(0) f(1)] = e^{−1/2}; E[f(0) f′(1)] = −r′(−1)·… = (−1)·∂r(−1)
        for (a, b, want) in [(0, 2, (-0.5f64).exp()), (0, 3, -(-0.5f64).exp()), (1, 3, 0.0)] {
            let prod: Vec<f64> = draws.iter().map(|d| d[a] * d[b]).collect();
            let e = mean_se(&prod);
            assert!((e.value - want).abs() < 3.0 * e.std_error, "({a},{b}): {e:?} vs {want}");
        }
    }

    #[test]
    fn degenerate_but_psd_covariance_still_samples() {
        // Berry 2-jet at a point is singular; jitter makes it factorable.
        let k = Kernel::berry(2).unwrap();
        let alphas = crate::polycore::monomials(2, 2);
        assert!(Sampler::new(&k, &[vec![0.0, 0.0]], &alphas, 1).is_ok());
    }
}
