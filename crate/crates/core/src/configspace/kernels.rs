use nalgebra::DMatrix;

use super::config::{Configuration, Partition};
use super::grassmann::{subspace_angle, Subspace};
use crate::error::{Error, Result};
use crate::interp::kergin_matrix;
use crate::linalg::{null_space, singular_values};
use crate::polycore::monomials;

/// Matrix of ev_x̄ on ℝ_d[X]: row i holds xᵢ^α for |α| ≤ d, graded-lex.
pub fn eval_matrix(config: &Configuration, degree: usize) -> DMatrix<f64> {
    let basis = monomials(config.n(), degree);
    let pts = config.points();
    DMatrix::from_fn(pts.len(), basis.len(), |i, j| basis[j].monomial(&pts[i]))
}

/// Kernel of a p-row map that should be surjective; RankDeficient otherwise.
fn surjective_kernel(m: &DMatrix<f64>, expected: usize, clusters: usize) -> Result<Subspace> {
    let ns = null_space(m);
    if ns.rank < expected || clusters < expected {
        return Err(Error::RankDeficient { expected, observed: ns.rank.min(clusters) });
    }
    Subspace::new(ns.basis)
}

/// 𝒢(x̄) = ker(ev_x̄ : ℝ_{p−1}[X] → ℝᵖ), codimension p.
///
/// Configurations that cluster at their tolerance are reported as rank
/// deficient, with the observed rank capped by the number of clusters.
pub fn ev_kernel(config: &Configuration) -> Result<Subspace> {
    let p = config.p();
    let clusters = config.clustering_partition().len();
    surjective_kernel(&eval_matrix(config, p - 1), p, clusters)
}

/// (𝒢_I, 𝒢̃_I) for a cluster I (0-based indices): 𝒢_I = ker ev_{x̄_I} on
/// ℝ_{|I|−1}[X] and 𝒢̃_I = ker(ev_{x̄_I} ∘ K(·, x̄_I)) on ℝ_{p−1}[X].
pub fn ev_kernel_cluster(config: &Configuration, cell: &[usize]) -> Result<(Subspace, Subspace)> {
    let sub = config.restrict(cell)?;
    let g_i = ev_kernel(&sub)?;
    let q = sub.p();
    let kergin = kergin_matrix(sub.points(), config.p() - 1)?;
    let composite = eval_matrix(&sub, q - 1) * kergin;
    let clusters = sub.clustering_partition().len();
    let g_tilde = surjective_kernel(&composite, q, clusters)?;
    Ok((g_i, g_tilde))
}

/// Outcome of [`partition_intersection_check`].
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct IntersectionReport {
    /// codim 𝒢̃_I for each cell, in partition order.
    pub codims: Vec<usize>,
    pub codim_sum: usize,
    pub intersection_dim: usize,
    pub expected_dim: usize,
    /// Smallest singular value of the stacked complements; positive iff transverse.
    pub transversality_gap: f64,
    /// Largest principal angle between ⋂ 𝒢̃_I and 𝒢 (π/2 when dimensions differ).
    pub distance: f64,
}

impl IntersectionReport {
    /// Codimensions add up to p, dimensions agree and the distance is within `tol`.
    pub fn passes(&self, p: usize, tol: f64) -> bool {
        self.codim_sum == p && self.intersection_dim == self.expected_dim && self.distance <= tol
    }
}

/// Checks 𝒢(x̄) = ⋂_{I ∈ partition} 𝒢̃_I(x̄) and that the intersection is transverse.
pub fn partition_intersection_check(config: &Configuration, partition: &Partition) -> Result<IntersectionReport> {
    if partition.p() != config.p() {
        return Err(Error::DimensionMismatch { expected: config.p(), got: partition.p() });
    }
    let g = ev_kernel(config)?;
    let big_n = g.ambient_dim();
    let mut codims = Vec::with_capacity(partition.len());
    let mut complements: Vec<DMatrix<f64>> = Vec::with_capacity(partition.len());
    for cell in partition.cells() {
        let (_, g_tilde) = ev_kernel_cluster(config, cell)?;
        codims.push(g_tilde.codim());
        complements.push(g_tilde.complement().basis().clone());
    }
    let codim_sum: usize = codims.iter().sum();
    let mut stacked = DMatrix::zeros(big_n, codim_sum);
    let mut col = 0;
    for c in &complements {
        stacked.view_mut((0, col), (big_n, c.ncols())).copy_from(c);
        col += c.ncols();
    }
    let transversality_gap = singular_values(&stacked).last().copied().unwrap_or(0.0);
    let inter = Subspace::new(null_space(&stacked.transpose()).basis)?;
    let distance = if inter.dim() == g.dim() { subspace_angle(&inter, &g)? } else { std::f64::consts::FRAC_PI_2 };
    Ok(IntersectionReport {
        codims,
        codim_sum,
        intersection_dim: inter.dim(),
        expected_dim: g.dim(),
        transversality_gap,
        distance,
    })
}

/// One row of [`limit_probe`].
#[derive(Debug, Clone)]
pub struct ProbeRow {
    pub epsilon: f64,
    pub kernel: Subspace,
    pub angle_to_expected: Option<f64>,
    /// Angle to the previous row's kernel.
    pub increment: Option<f64>,
}

/// Follows 𝒢(path(ε)) along decreasing ε, recording Cauchy increments and,
/// if given, the angle to an expected limit.
pub fn limit_probe(
    path: &dyn Fn(f64) -> Configuration,
    epsilons: &[f64],
    expected: Option<&Subspace>,
) -> Result<Vec<ProbeRow>> {
    let mut rows: Vec<ProbeRow> = Vec::with_capacity(epsilons.len());
    for &epsilon in epsilons {
        let kernel = ev_kernel(&path(epsilon))?;
        let angle_to_expected = expected.map(|e| subspace_angle(&kernel, e)).transpose()?;
        let increment = rows.last().map(|r| subspace_angle(&r.kernel, &kernel)).transpose()?;
        rows.push(ProbeRow { epsilon, kernel, angle_to_expected, increment });
    }
    Ok(rows)
}

/// `count` log-spaced values from `hi` down to `lo`.
pub fn log_spaced(hi: f64, lo: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![hi];
    }
    let (a, b) = (hi.ln(), lo.ln());
    (0..count).map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(points: &[&[f64]]) -> Configuration {
        Configuration::new(points.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    fn line(v: &[f64]) -> Subspace {
        Subspace::span(&DMatrix::from_column_slice(v.len(), 1, v))
    }

    #[test]
    fn eval_matrix_examples() {
        let m = eval_matrix(&cfg(&[&[0.0], &[1.0], &[2.0]]), 2);
        assert_eq!(m, DMatrix::from_row_slice(3, 3, &[1., 0., 0., 1., 1., 1., 1., 2., 4.]));
        let m = eval_matrix(&cfg(&[&[0.0, 0.0]]), 2);
        assert_eq!(m.row(0).iter().copied().collect::<Vec<_>>(), vec![1., 0., 0., 0., 0., 0.]);
        let m = eval_matrix(&cfg(&[&[2.5, -1.5]]), 1);
        assert_eq!(m.row(0).iter().copied().collect::<Vec<_>>(), vec![1., 2.5, -1.5]);
    }

    #[test]
    fn ev_kernel_examples() {
        // ((0,0),(0,1)): kernel span(X₁) = Span(X₁ sinθ − X₂ cosθ) at θ = π/2
        let k = ev_kernel(&cfg(&[&[0.0, 0.0], &[0.0, 1.0]])).unwrap();
        assert_eq!((k.ambient_dim(), k.codim()), (3, 2));
        assert!(subspace_angle(&k, &line(&[0.0, 1.0, 0.0])).unwrap() < 1e-15);

        let k = ev_kernel(&cfg(&[&[0.3, 7.0]])).unwrap();
        assert_eq!((k.ambient_dim(), k.dim()), (1, 0));

        let k = ev_kernel(&cfg(&[&[0.0], &[1.0], &[2.0]])).unwrap();
        assert_eq!((k.ambient_dim(), k.dim()), (3, 0));
    }

    #[test]
    fn ev_kernel_rejects_diagonal() {
        let err = ev_kernel(&cfg(&[&[1.0, 1.0], &[1.0, 1.0]])).unwrap_err();
        assert_eq!(err, Error::RankDeficient { expected: 2, observed: 1 });
    }

    #[test]
    fn cluster_kernels() {
        let c = cfg(&[&[0.1, 0.2], &[0.9, -0.4], &[-0.5, 0.6]]);
        let g = ev_kernel(&c).unwrap();
        let (gi, gt) = ev_kernel_cluster(&c, &[0, 1, 2]).unwrap();
        assert!(subspace_angle(&gi, &g).unwrap() < 1e-12);
        assert!(subspace_angle(&gt, &g).unwrap() < 1e-12);

        let (_, single) = ev_kernel_cluster(&c, &[1]).unwrap();
        assert_eq!(single.codim(), 1);
        // 𝒢̃_{i} = {P : P(xᵢ) = 0}: its complement is spanned by the evaluation row.
        let row = eval_matrix(&c.restrict(&[1]).unwrap(), 2).transpose();
        assert!(single.complement().containment_residual(&Subspace::span(&row)).unwrap() < 1e-12);

        let (_, pair) = ev_kernel_cluster(&c, &[0, 1]).unwrap();
        assert_eq!(pair.codim(), 2);
        assert!(pair.containment_residual(&g).unwrap() < 1e-9);
    }

    #[test]
    fn intersection_examples() {
        let c = cfg(&[&[0.1, 0.2], &[0.9, -0.4], &[-0.5, 0.6], &[0.3, 0.8]]);
        for part in
            [Partition::discrete(4), Partition::coarsest(4), Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap()]
        {
            let r = partition_intersection_check(&c, &part).unwrap();
            assert!(r.passes(4, 1e-8), "{part}: {r:?}");
            assert_eq!(r.intersection_dim, r.expected_dim);
            assert!(r.distance <= 1e-8, "{part}: {}", r.distance);
            assert!(r.transversality_gap > 1e-8);
        }
    }

    #[test]
    fn probe_rotating_pair() {
        let eps = log_spaced(1e-1, 1e-5, 200);
        let path = |e: f64| cfg(&[&[0.0, 0.0], &[e * e.cos(), e * e.sin()]]);
        let target = line(&[0.0, 0.0, 1.0]);
        let rows = limit_probe(&path, &eps, Some(&target)).unwrap();
        for r in &rows {
            assert!((r.angle_to_expected.unwrap() - r.epsilon).abs() < 1e-10);
        }
        let inc: Vec<f64> = rows.iter().filter_map(|r| r.increment).collect();
        assert!(inc.windows(2).all(|w| w[1] < w[0]));
        assert!(*inc.last().unwrap() < 1e-6);
    }

    #[test]
    fn probe_constant_and_symmetric_paths() {
        let eps = log_spaced(1e-1, 1e-5, 20);
        let fixed = |_: f64| cfg(&[&[0.0, 0.0], &[1.0, 2.0]]);
        let rows = limit_probe(&fixed, &eps, None).unwrap();
        assert!(rows.iter().filter_map(|r| r.increment).all(|a| a < 1e-14));

        // {P ∈ ℝ₁[X] : P(0) = 0, D₀P·e₁ = 0} = span(X₂)
        let sym = |e: f64| cfg(&[&[-e, 0.0], &[e, 0.0]]);
        let limit = line(&[0.0, 0.0, 1.0]);
        for r in limit_probe(&sym, &eps, Some(&limit)).unwrap() {
            assert!(r.angle_to_expected.unwrap() < 1e-15);
        }
    }
}
