use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::conditional::{conditional_from_matrix, psd_factor, rcond_sym};
use super::jacobian::{chi_mean, jacobian_unchecked};
use crate::configspace::Configuration;
use crate::error::{Error, Result, Warning};
use crate::gaussfield::{jet_covariance, Kernel};
use crate::rng::{stream, Domain};
use crate::stats::{mean_se, weighted_line_fit, Estimate, LineFit};

pub const DEFAULT_MC_SAMPLES: usize = 100_000;

/// Draws per random stream; stream c covers draws [c·CHUNK, (c+1)·CHUNK).
pub const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
    pub method: Method,
}

impl DensityEstimate {
    fn closed(value: f64) -> Self {
        DensityEstimate { value, std_error: 0.0, samples: 0, method: Method::ClosedForm }
    }

    pub fn estimate(&self) -> Estimate {
        Estimate { value: self.value, std_error: self.std_error }
    }
}

/// Conditional law of the derivative rows given vanishing values at p sites,
/// for one scalar unit-variance field; components are independent copies.
pub(crate) struct JacModel {
    p: usize,
    n: usize,
    r: usize,
    /// Square-root factor of the conditional covariance (p·n × p·n),
    /// rows ordered by site then coordinate.
    factor: DMatrix<f64>,
    /// det(2π Var(values))^{r/2}.
    pub denominator: f64,
}

fn check_r(kernel: &Kernel, r: usize) -> Result<()> {
    if r == 0 || r > kernel.n() {
        return Err(Error::InvalidInput(format!("need 1 ≤ r ≤ n = {}, got r = {r}", kernel.n())));
    }
    Ok(())
}

/// Lexicographic order; ρ_p is symmetric so sites are canonicalized first.
fn canonical(sites: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut s = sites.to_vec();
    s.sort_by(|a, b| {
        a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    });
    s
}

impl JacModel {
    pub(crate) fn new(kernel: &Kernel, r: usize, sites: &[Vec<f64>]) -> Result<Self> {
        check_r(kernel, r)?;
        let corr = kernel.correlation();
        let n = corr.n();
        let p = sites.len();
        let sites = canonical(sites);
        let jc = jet_covariance(&corr, &sites, 1, 1)?;
        let value_rows: Vec<usize> = (0..p).map(|i| i * (n + 1)).collect();
        let cond = conditional_from_matrix(&jc.matrix, &value_rows)?;
        let det = cond.value_covariance.clone().cholesky().map(|c| c.l().diagonal().product().powi(2));
        let det = det.ok_or(Error::DegenerateConditioning { rcond: cond.rcond })?;
        let denominator = ((2.0 * std::f64::consts::PI).powi(p as i32) * det).powf(r as f64 / 2.0);
        Ok(JacModel { p, n, r, factor: psd_factor(&cond.covariance), denominator })
    }

    /// One draw of ∏ᵢ Jac(D_{xᵢ} f) per entry; draws are keyed by (seed, index).
    pub(crate) fn samples(&self, samples: usize, seed: u64) -> Vec<f64> {
        let chunks = samples.div_ceil(CHUNK);
        let parts: Vec<Vec<f64>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let count = CHUNK.min(samples - c * CHUNK);
                let mut rng = stream(seed, Domain::KacRice, c as u64);
                let mut out = Vec::with_capacity(count);
                let m = self.p * self.n;
                let mut z = vec![0.0; m];
                let mut d = vec![vec![0.0; m]; self.r];
                for _ in 0..count {
                    for row in d.iter_mut() {
                        z.iter_mut().for_each(|v| *v = rng.sample(StandardNormal));
                        for (i, di) in row.iter_mut().enumerate() {
                            let mut acc = 0.0;
                            for (j, zj) in z.iter().enumerate() {
                                acc += self.factor[(i, j)] * zj;
                            }
                            *di = acc;
                        }
                    }
                    out.push(self.jac_product(&d));
                }
                out
            })
            .collect();
        parts.concat()
    }

    fn jac_product(&self, d: &[Vec<f64>]) -> f64 {
        let n = self.n;
        (0..self.p)
            .map(|i| {
                let block = |c: usize| &d[c][i * n..(i + 1) * n];
                if self.r == 1 {
                    block(0).iter().map(|x| x * x).sum::<f64>().sqrt()
                } else {
                    let l = DMatrix::from_fn(self.r, n, |c, j| block(c)[j]);
                    jacobian_unchecked(&l)
                }
            })
            .product()
    }

    pub(crate) fn estimate(&self, samples: usize, seed: u64) -> DensityEstimate {
        let draws = self.samples(samples, seed);
        let e = mean_se(&draws);
        DensityEstimate {
            value: e.value / self.denominator,
            std_error: e.std_error / self.denominator,
            samples,
            method: Method::MonteCarlo,
        }
    }
}

/// ρ₁(x) = E[Jac(D_x f) | f(x) = 0] / det(2π Var f(x))^{1/2} for r independent
/// copies of the field. Closed forms: r = n (Gaussian determinant moments)
/// and isotropic conditional gradient covariance (chi moments); Monte Carlo
/// otherwise. Computed from the correlation, so invariant under scaling of f.
pub fn rho1(kernel: &Kernel, r: usize, x: &[f64], samples: usize, seed: u64) -> Result<DensityEstimate> {
    check_r(kernel, r)?;
    let n = kernel.n();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.len() });
    }
    let corr = kernel.correlation();
    let jc = jet_covariance(&corr, &[x.to_vec()], 1, 1)?;
    let cond = conditional_from_matrix(&jc.matrix, &[0])?;
    let c = &cond.covariance;
    let var0 = cond.value_covariance[(0, 0)];
    let denom = (2.0 * std::f64::consts::PI * var0).powf(r as f64 / 2.0);
    if n == 1 {
        return Ok(DensityEstimate::closed(c[(0, 0)].sqrt() / (std::f64::consts::PI * var0.sqrt())));
    }
    if r == n {
        let chi: f64 = (1..=n).map(chi_mean).product();
        return Ok(DensityEstimate::closed(c.determinant().max(0.0).sqrt() * chi / denom));
    }
    let lambda = c.trace() / n as f64;
    let off = (c - DMatrix::identity(n, n) * lambda).abs().max();
    if off <= 1e-14 * lambda {
        let chi: f64 = (n - r + 1..=n).map(chi_mean).product();
        return Ok(DensityEstimate::closed(lambda.powf(r as f64 / 2.0) * chi / denom));
    }
    Ok(JacModel::new(kernel, r, &[x.to_vec()])?.estimate(samples, seed))
}

/// ρ_p(x₁, …, x_p) by Monte Carlo over the conditional law of all first
/// derivatives given vanishing values. Common random numbers: the same seed
/// reuses the same normal draws for every configuration.
pub fn rho_p(kernel: &Kernel, r: usize, config: &Configuration, samples: usize, seed: u64) -> Result<DensityEstimate> {
    if config.n() != kernel.n() {
        return Err(Error::DimensionMismatch { expected: kernel.n(), got: config.n() });
    }
    Ok(JacModel::new(kernel, r, config.points())?.estimate(samples, seed))
}

/// Value-covariance conditioning of the pair (0, εu).
pub fn pair_rcond(kernel: &Kernel, u: &[f64], eps: f64) -> Result<f64> {
    let corr = kernel.correlation();
    let y: Vec<f64> = u.iter().map(|c| eps * c).collect();
    let jc = jet_covariance(&corr, &[vec![0.0; u.len()], y], 0, 1)?;
    Ok(rcond_sym(&jc.matrix))
}

/// Smallest ε (to a factor 1.01) at which the reciprocal condition number of
/// Var(f(0), f(εu)) stays at or above `min_rcond`.
pub fn stable_floor(kernel: &Kernel, u: &[f64], min_rcond: f64) -> Result<f64> {
    let (mut lo, mut hi) = (1e-12f64, 1.0f64);
    if pair_rcond(kernel, u, hi)? < min_rcond {
        return Ok(hi);
    }
    while hi / lo > 1.01 {
        let mid = (lo * hi).sqrt();
        if pair_rcond(kernel, u, mid)? >= min_rcond {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingPoint {
    pub epsilon: f64,
    pub estimate: DensityEstimate,
}

/// Outcome of [`diagonal_scaling_probe`].
#[derive(Debug, Clone, Serialize)]
pub struct ScalingProbe {
    pub points: Vec<ScalingPoint>,
    /// log ρ₂ against log ε.
    pub fit: Option<LineFit>,
    /// Grid values skipped because conditioning broke down.
    pub skipped: Vec<f64>,
    pub warnings: Vec<Warning>,
}

/// Fits the exponent a in ρ₂(0, εu) ∝ ε^a for the hypersurface case r = 1.
pub fn diagonal_scaling_probe(
    kernel: &Kernel,
    u: &[f64],
    eps_grid: &[f64],
    samples: usize,
    seed: u64,
) -> Result<ScalingProbe> {
    let n = kernel.n();
    if u.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: u.len() });
    }
    let norm = u.iter().map(|c| c * c).sum::<f64>().sqrt();
    let u: Vec<f64> = u.iter().map(|c| c / norm).collect();
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    for &eps in eps_grid {
        let y: Vec<f64> = u.iter().map(|c| eps * c).collect();
        match JacModel::new(kernel, 1, &[vec![0.0; n], y]) {
            Ok(model) => points.push(ScalingPoint { epsilon: eps, estimate: model.estimate(samples, seed) }),
            Err(Error::DegenerateConditioning { .. }) => skipped.push(eps),
            Err(e) => return Err(e),
        }
    }
    let mut warnings = Vec::new();
    if let Some(&floor) = skipped.iter().max_by(|a, b| a.total_cmp(b)) {
        warnings.push(Warning::ConditioningFloor { epsilon: floor });
    }
    let fit = (points.len() >= 2).then(|| {
        let x: Vec<f64> = points.iter().map(|p| p.epsilon.ln()).collect();
        let y: Vec<f64> = points.iter().map(|p| p.estimate.value.ln()).collect();
        let s: Vec<f64> = points.iter().map(|p| p.estimate.std_error / p.estimate.value).collect();
        weighted_line_fit(&x, &y, &s)
    });
    Ok(ScalingProbe { points, fit, skipped, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rho1_closed_forms() {
        let bf = Kernel::bargmann_fock(1);
        let e = rho1(&bf, 1, &[0.3], 0, 0).unwrap();
        assert_eq!(e.method, Method::ClosedForm);
        assert!((e.value - 1.0 / PI).abs() < 1e-15);
        assert!((rho1(&Kernel::berry(1).unwrap(), 1, &[0.0], 0, 0).unwrap().value - 1.0 / PI).abs() < 1e-15);
        let e2 = rho1(&Kernel::bargmann_fock(2), 2, &[0.0, 0.0], 0, 0).unwrap();
        assert!((e2.value - 1.0 / (2.0 * PI)).abs() < 1e-15);
        // r = 1 < n = 2, isotropic: E‖∇f‖ = E χ₂ = √(π/2), over √(2π)
        let e3 = rho1(&Kernel::bargmann_fock(2), 1, &[0.0, 0.0], 0, 0).unwrap();
        assert!((e3.value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn scale_invariance_is_exact() {
        let cfg = Configuration::new(vec![vec![0.0, 0.0], vec![0.4, 0.1]]).unwrap();
        let base = Kernel::bargmann_fock(2);
        let want = rho_p(&base, 1, &cfg, 5000, 3).unwrap();
        for c in [0.1, 1.0, 10.0] {
            let k = base.scaled(c);
            assert_eq!(rho_p(&k, 1, &cfg, 5000, 3).unwrap(), want);
            assert_eq!(rho1(&k, 1, &[0.0, 0.0], 0, 0).unwrap(), rho1(&base, 1, &[0.0, 0.0], 0, 0).unwrap());
        }
    }

    #[test]
    fn rho_p_single_point_matches_rho1() {
        let k = Kernel::bargmann_fock(1);
        let cfg = Configuration::new(vec![vec![0.0]]).unwrap();
        let mc = rho_p(&k, 1, &cfg, 100_000, 5).unwrap();
        assert!((mc.value - 1.0 / PI).abs() < 3.0 * mc.std_error, "{mc:?}");
    }

    #[test]
    fn permutation_symmetric() {
        let k = Kernel::bargmann_fock(2);
        let a = Configuration::new(vec![vec![0.0, 0.0], vec![0.3, -0.2], vec![-0.5, 0.4]]).unwrap();
        let b = Configuration::new(vec![vec![-0.5, 0.4], vec![0.0, 0.0], vec![0.3, -0.2]]).unwrap();
        let (x, y) = (rho_p(&k, 2, &a, 2000, 1).unwrap(), rho_p(&k, 2, &b, 2000, 1).unwrap());
        assert!((x.value - y.value).abs() <= 1e-12 * x.value.abs());
    }

    #[test]
    fn far_points_factorize() {
        let k = Kernel::bargmann_fock(1);
        let cfg = Configuration::new(vec![vec![0.0], vec![10.0]]).unwrap();
        let e = rho_p(&k, 1, &cfg, 100_000, 11).unwrap();
        assert!((e.value - 1.0 / (PI * PI)).abs() < 3.0 * e.std_error, "{e:?}");
    }

    #[test]
    fn diagonal_is_refused() {
        let k = Kernel::bargmann_fock(1);
        let cfg = Configuration::with_tol(vec![vec![0.0], vec![1e-9]], 0.0).unwrap();
        assert!(matches!(rho_p(&k, 1, &cfg, 10, 0), Err(Error::DegenerateConditioning { .. })));
        let floor = stable_floor(&k, &[1.0], crate::kacrice::RCOND_FLOOR).unwrap();
        assert!(floor > 1e-7 && floor < 1e-5, "{floor}");
    }
}
