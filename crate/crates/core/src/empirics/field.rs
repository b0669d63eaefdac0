use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use super::zeros::{Grid1D, Grid2D};
use crate::error::{Error, Result};
use crate::gaussfield::{Kernel, Sampler};
use crate::polycore::MultiIndex;

/// Default grid spacing in correlation lengths.
pub const SPACING: f64 = 0.02;

/// Largest dense jet covariance factored for 2-D sampling.
pub const DENSE_LIMIT: usize = 2000;

fn cells(len: f64, h: f64) -> usize {
    (len / h).ceil().max(1.0) as usize
}

fn nodes(a: f64, b: f64, m: usize) -> Vec<Vec<f64>> {
    (0..=m).map(|i| vec![if i == m { b } else { a + (b - a) * i as f64 / m as f64 }]).collect()
}

/// Draws (∂^k f, ∂^{k+1} f) on a uniform grid of [a, b] for a 1-D field.
/// k = 0 samples the path, k = 1 its derivative.
pub struct PathSampler {
    a: f64,
    b: f64,
    sampler: Sampler,
    /// Derivative orders drawn at each node.
    orders: Vec<u32>,
}

impl PathSampler {
    pub fn new(kernel: &Kernel, bx: (f64, f64), spacing: f64, orders: &[u32]) -> Result<Self> {
        if kernel.n() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: kernel.n() });
        }
        let (a, b) = bx;
        if !(b > a) {
            return Err(Error::InvalidInput(format!("empty window [{a}, {b})")));
        }
        let m = cells(b - a, spacing * kernel.correlation_length());
        let alphas: Vec<MultiIndex> =
            orders.iter().map(|&k| MultiIndex::new(vec![k]).expect("one-dimensional")).collect();
        let sampler = Sampler::new(kernel, &nodes(a, b, m), &alphas, 1)?;
        Ok(PathSampler { a, b, sampler, orders: orders.to_vec() })
    }

    pub fn cells(&self) -> usize {
        self.sampler.dim() / self.orders.len() - 1
    }

    /// Raw draw, laid out node by node.
    pub fn draw<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        self.sampler.draw(rng)
    }

    /// Grid of the derivative of order `orders[j]` with slopes `orders[j] + 1`.
    pub fn grid(&self, draw: &[f64], order: u32) -> Result<Grid1D> {
        let k = self.orders.len();
        let pick = |o: u32| -> Result<Vec<f64>> {
            let j = self
                .orders
                .iter()
                .position(|&x| x == o)
                .ok_or_else(|| Error::InvalidInput(format!("derivative order {o} not sampled")))?;
            Ok(draw.iter().skip(j).step_by(k).copied().collect())
        };
        Grid1D::new(self.a, self.b, pick(order)?, Some(pick(order + 1)?))
    }
}

/// Draws (f, ∂₁f, ∂₂f) of one component on a uniform grid of a 2-D box.
pub enum PlaneSampler {
    /// ρ(t) = ρ₁(t₁)ρ₁(t₂): F = σ·L₁ Z L₂ᵀ over the 1-D (g, g′) jets.
    Separable {
        xs: Vec<f64>,
        ys: Vec<f64>,
        lx: DMatrix<f64>,
        ly: DMatrix<f64>,
        sd: f64,
    },
    Dense {
        xs: Vec<f64>,
        ys: Vec<f64>,
        sampler: Sampler,
    },
}

impl PlaneSampler {
    pub fn new(kernel: &Kernel, bx: [(f64, f64); 2], spacing: f64) -> Result<Self> {
        if kernel.n() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: kernel.n() });
        }
        for &(a, b) in &bx {
            if !(b > a) {
                return Err(Error::InvalidInput(format!("empty window [{a}, {b})")));
            }
        }
        let ell = kernel.correlation_length();
        let one = |k: &Kernel, i: usize, h: f64| -> Result<(Vec<f64>, Sampler)> {
            let (a, b) = bx[i];
            let sites = nodes(a, b, cells(b - a, h));
            let alphas = [MultiIndex::new(vec![0]).expect("1-D"), MultiIndex::new(vec![1]).expect("1-D")];
            let s = Sampler::new(k, &sites, &alphas, 1)?;
            Ok((sites.into_iter().map(|v| v[0]).collect(), s))
        };
        if let Some(g) = kernel.separable_factor() {
            let (xs, sx) = one(&g, 0, spacing * ell)?;
            let (ys, sy) = one(&g, 1, spacing * ell)?;
            return Ok(PlaneSampler::Separable {
                xs,
                ys,
                lx: sx.factor().clone(),
                ly: sy.factor().clone(),
                sd: kernel.variance().sqrt(),
            });
        }
        // coarsen (up to 0.05 correlation lengths) until the dense factor is affordable
        let mut h = spacing * ell;
        loop {
            let (mx, my) = (cells(bx[0].1 - bx[0].0, h), cells(bx[1].1 - bx[1].0, h));
            let dim = 3 * (mx + 1) * (my + 1);
            if dim <= DENSE_LIMIT {
                let xs: Vec<f64> = nodes(bx[0].0, bx[0].1, mx).into_iter().map(|v| v[0]).collect();
                let ys: Vec<f64> = nodes(bx[1].0, bx[1].1, my).into_iter().map(|v| v[0]).collect();
                let sites: Vec<Vec<f64>> = xs.iter().flat_map(|&x| ys.iter().map(move |&y| vec![x, y])).collect();
                let alphas: Vec<MultiIndex> =
                    [[0, 0], [1, 0], [0, 1]].iter().map(|e| MultiIndex::new(e.to_vec()).expect("2-D")).collect();
                let sampler = Sampler::new(kernel, &sites, &alphas, 1)?;
                return Ok(PlaneSampler::Dense { xs, ys, sampler });
            }
            if h >= 0.05 * ell {
                return Err(Error::InvalidInput(format!(
                    "box needs a {dim}-dimensional dense covariance at spacing {h}; limit is {DENSE_LIMIT}"
                )));
            }
            h = (h * 1.25).min(0.05 * ell);
        }
    }

    pub fn axes(&self) -> (&[f64], &[f64]) {
        match self {
            PlaneSampler::Separable { xs, ys, .. } | PlaneSampler::Dense { xs, ys, .. } => (xs, ys),
        }
    }

    /// One component; node (i, j) at i·ny + j.
    pub fn draw<R: Rng>(&self, rng: &mut R) -> Vec<[f64; 3]> {
        match self {
            PlaneSampler::Separable { xs, ys, lx, ly, sd } => {
                let z = DMatrix::from_fn(lx.ncols(), ly.ncols(), |_, _| rng.sample::<f64, _>(StandardNormal));
                let f = lx * z * ly.transpose() * *sd;
                let mut out = Vec::with_capacity(xs.len() * ys.len());
                for i in 0..xs.len() {
                    for j in 0..ys.len() {
                        out.push([f[(2 * i, 2 * j)], f[(2 * i + 1, 2 * j)], f[(2 * i, 2 * j + 1)]]);
                    }
                }
                out
            }
            PlaneSampler::Dense { sampler, .. } => sampler.draw(rng).chunks(3).map(|c| [c[0], c[1], c[2]]).collect(),
        }
    }

    pub fn grid<R: Rng>(&self, rng: &mut R) -> Result<Grid2D> {
        let (xs, ys) = self.axes();
        let a = self.draw(rng);
        let b = self.draw(rng);
        Grid2D::new(xs.to_vec(), ys.to_vec(), [a, b])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Domain};
    use crate::stats::mean_se;

    #[test]
    fn bargmann_fock_grid_factorizes() {
        let s = PathSampler::new(&Kernel::bargmann_fock(1), (0.0, 1.0), SPACING, &[0, 1]).unwrap();
        assert_eq!(s.cells(), 50);
        let g = s.grid(&s.draw(&mut stream(1, Domain::Empirics, 0)), 0).unwrap();
        assert_eq!(g.values.len(), 51);
    }

    #[test]
    fn separable_plane_has_unit_variances() {
        let s = PlaneSampler::new(&Kernel::bargmann_fock(2), [(0.0, 0.5), (0.0, 0.5)], 0.05).unwrap();
        assert!(matches!(s, PlaneSampler::Separable { .. }));
        let mut rng = stream(2, Domain::Empirics, 0);
        let draws: Vec<Vec<[f64; 3]>> = (0..20_000).map(|_| s.draw(&mut rng)).collect();
        for k in 0..3 {
            let sq: Vec<f64> = draws.iter().map(|d| d[7][k] * d[7][k]).collect();
            let e = mean_se(&sq);
            assert!((e.value - 1.0).abs() < 3.5 * e.std_error, "{k}: {e:?}");
        }
        // E[f ∂₁f] = 0 at a point
        let cross: Vec<f64> = draws.iter().map(|d| d[3][0] * d[3][1]).collect();
        assert!(mean_se(&cross).value.abs() < 3.5 * mean_se(&cross).std_error);
    }
}
