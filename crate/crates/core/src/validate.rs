//! The acceptance suite: twelve self-contained checks, each returning a
//! serializable verdict with the metrics it was judged on.
//!
//! Random cases for criterion `i` come from `stream(seed, Oracle, i)`, and
//! the Monte Carlo seed of criterion `i` is `derive_seed(seed, i)`, so every
//! criterion can be rerun alone and gives the same bytes.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::configspace::{
    ev_kernel, ev_kernel_cluster, eval_matrix, log_spaced, multijet2, partition_intersection_check, subspace_angle,
    Configuration, Site2, Subspace,
};
use crate::empirics::{critical_points_1d, empirical_moments};
use crate::error::Result;
use crate::gaussfield::{nondegeneracy_check, Kernel};
use crate::interp::FnOracle;
use crate::interp::{divdiff_1d_oracle, divided_difference, kergin, kergin_matrix, BuiltinFn, Profile};
use crate::kacrice::{
    diagonal_scaling_probe, factorial_moment_integral, gamma_r, jacobian, jacobian_g, rho1, volume_density,
    IntegrationConfig,
};
use crate::linalg::null_space;
use crate::polycore::{basis_dim, poly_jet, taylor_poly, MultiIndex, Poly};
use crate::rng::{derive_seed, stream, Domain};
use crate::stats::{weighted_line_fit, Estimate};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
    /// The rule the value was held to, e.g. "<= 1e-6".
    pub bound: String,
    pub pass: bool,
}

impl Metric {
    fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Metric { name: name.into(), value, bound: format!("<= {limit:e}"), pass: value <= limit }
    }

    fn at_least(name: &str, value: f64, limit: f64) -> Self {
        Metric { name: name.into(), value, bound: format!(">= {limit:e}"), pass: value >= limit }
    }

    fn within(name: &str, value: f64, lo: f64, hi: f64) -> Self {
        Metric { name: name.into(), value, bound: format!("in [{lo}, {hi}]"), pass: (lo..=hi).contains(&value) }
    }

    fn equals(name: &str, value: usize, want: usize) -> Self {
        Metric { name: name.into(), value: value as f64, bound: format!("== {want}"), pass: value == want }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: String,
    pub pass: bool,
    pub metrics: Vec<Metric>,
    pub note: Option<String>,
}

impl CriterionResult {
    fn new(id: u8, title: &str, metrics: Vec<Metric>) -> Self {
        let pass = !metrics.is_empty() && metrics.iter().all(|m| m.pass);
        CriterionResult { id, title: title.into(), pass, metrics, note: None }
    }

    fn failed(id: u8, title: &str, err: crate::Error) -> Self {
        CriterionResult {
            id,
            title: title.into(),
            pass: false,
            metrics: vec![],
            note: Some(format!("{}: {err}", err.code())),
        }
    }

    fn with_note(mut self, note: String) -> Self {
        self.note = Some(note);
        self
    }
}

/// Sample sizes for the statistical criteria.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidateConfig {
    pub seed: u64,
    pub trials: usize,
    pub samples: usize,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        ValidateConfig { seed: 0, trials: 5000, samples: 100_000 }
    }
}

pub const TITLES: [&str; 12] = [
    "simplex divided differences match the classical recursion",
    "Kergin interpolation identities",
    "compatibility map of clustered Kergin interpolants has full rank",
    "evaluation-kernel geometry",
    "blow-up limit along a spiral and multijet continuity",
    "Jacobian comparison identity",
    "jet non-degeneracy certificates",
    "Kac-Rice expectation for Bargmann-Fock n = r = 1",
    "diagonal scaling of the two-point density",
    "second moment from factorial moments",
    "critical points of the Bargmann-Fock path",
    "determinism across worker counts",
];

/// All criteria, with wall-clock seconds per criterion alongside.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationRun {
    pub config: ValidateConfig,
    pub results: Vec<CriterionResult>,
}

impl ValidationRun {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }
}

fn cases(seed: u64, id: u8) -> ChaCha20Rng {
    stream(seed, Domain::Oracle, id as u64)
}

fn run_one(id: u8, cfg: &ValidateConfig) -> CriterionResult {
    let title = TITLES[id as usize - 1];
    let r = match id {
        1 => c1_divided_differences(cfg),
        2 => c2_kergin(cfg),
        3 => c3_compatibility(cfg),
        4 => c4_geometry(cfg),
        5 => c5_limits(cfg),
        6 => c6_jacobians(cfg),
        7 => c7_nondegeneracy(),
        8 => c8_expectation(cfg),
        9 => c9_scaling(cfg),
        10 => c10_second_moment(cfg),
        11 => c11_critical(cfg),
        _ => unreachable!("criterion 12 compares whole runs"),
    };
    match r {
        Ok(metrics) => CriterionResult::new(id, title, metrics),
        Err(e) => CriterionResult::failed(id, title, e),
    }
}

/// Criteria 1 to 11 in the current rayon pool, with per-criterion seconds.
pub fn run_criteria(cfg: &ValidateConfig, ids: &[u8]) -> (Vec<CriterionResult>, Vec<f64>) {
    ids.iter()
        .map(|&id| {
            let t = Instant::now();
            let r = run_one(id, cfg);
            (r, t.elapsed().as_secs_f64())
        })
        .unzip()
}

/// The stochastic criteria, whose bytes could depend on scheduling.
pub const STOCHASTIC: [u8; 4] = [8, 9, 10, 11];

/// Reruns the stochastic criteria in a pool of a different size and
/// compares serialized bytes against `reference`.
pub fn determinism_check(cfg: &ValidateConfig, reference: &[CriterionResult]) -> CriterionResult {
    let title = TITLES[11];
    let ambient = rayon::current_num_threads();
    let other = if ambient == 1 { 4 } else { 1 };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(other).build() {
        Ok(p) => p,
        Err(e) => return CriterionResult::failed(12, title, crate::Error::InvalidInput(e.to_string())),
    };
    let rerun = pool.install(|| run_criteria(cfg, &STOCHASTIC).0);
    let mut mismatched = 0;
    for r in &rerun {
        let original = reference.iter().find(|x| x.id == r.id);
        let same = original.is_some_and(|o| {
            serde_json::to_vec(o).expect("serializable") == serde_json::to_vec(r).expect("serializable")
        });
        if !same {
            mismatched += 1;
        }
    }
    CriterionResult::new(12, title, vec![Metric::equals("mismatched criteria", mismatched, 0)])
        // the worker counts stay out of the note so the bytes do not depend on them
        .with_note(format!("criteria {STOCHASTIC:?} rerun in a pool of a different size"))
}

/// Runs the whole suite; criterion 12 reruns the stochastic ones in a
/// differently sized pool. Returns the run and the seconds per criterion.
pub fn run_all(cfg: &ValidateConfig) -> (ValidationRun, Vec<f64>) {
    let ids: Vec<u8> = (1..=11).collect();
    let (mut results, mut secs) = run_criteria(cfg, &ids);
    let t = Instant::now();
    let det = determinism_check(cfg, &results);
    results.push(det);
    secs.push(t.elapsed().as_secs_f64());
    (ValidationRun { config: *cfg, results }, secs)
}

fn mixed_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn uniform(rng: &mut ChaCha20Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

fn random_poly(rng: &mut ChaCha20Rng, n: usize, d: usize) -> Poly {
    let coeffs = (0..basis_dim(n, d)).map(|_| uniform(rng, -1.0, 1.0)).collect();
    Poly::from_coeffs(n, d, coeffs).expect("sized to the basis")
}

fn random_ridge(rng: &mut ChaCha20Rng, n: usize) -> BuiltinFn {
    let profile = [Profile::Sin, Profile::Cos, Profile::Exp][rng.random_range(0..3)];
    let w = (0..n).map(|_| uniform(rng, -2.0, 2.0)).collect();
    BuiltinFn::ridge(profile, w, uniform(rng, -1.0, 1.0))
}

fn random_point(rng: &mut ChaCha20Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| uniform(rng, -1.0, 1.0)).collect()
}

/// Smallest separation of distinct nodes in the divided-difference cases.
const MIN_GAP: f64 = 0.1;

fn c1_divided_differences(cfg: &ValidateConfig) -> Result<Vec<Metric>> {
    let mut rng = cases(cfg.seed, 1);
    let (mut worst_poly, mut worst_other) = (0.0f64, 0.0f64);
    for _ in 0..500 {
        let distinct = rng.random_range(1..=3);
        let mut pts = Vec::new();
        // separated nodes: the recursion loses about ε/δᵏ at gap δ, which would
        // measure the reference rather than the simplex integral
        let mut nodes: Vec<f64> = Vec::new();
        while nodes.len() < distinct {
            let x = uniform(&mut rng, -1.0, 1.0);
            if nodes.iter().all(|y| (x - y).abs() >= MIN_GAP) {
                nodes.push(x);
            }
        }
        for (j, &x) in nodes.iter().enumerate() {
            let room = 6 - pts.len() - (distinct - 1 - j);
            pts.extend(std::iter::repeat_n(x, rng.random_range(1..=3).min(room)));
        }
        let is_poly = rng.random_bool(0.5);
        let f = if is_poly {
            let d = rng.random_range(0..=7);
            BuiltinFn::Poly(random_poly(&mut rng, 1, d))
        } else {
            random_ridge(&mut rng, 1)
        };
        let sites: Vec<Vec<f64>> = pts.iter().map(|&x| vec![x]).collect();
        let simplex = divided_difference(&f, &sites)?.coeffs()[0];
        let classical = divdiff_1d_oracle(&f, &pts)?;
        let e = mixed_error(simplex, classical);
        if is_poly {
            worst_poly = worst_poly.max(e);
        } else {
            worst_other = worst_other.max(e);
        }
    }
    Ok(vec![
        Metric::at_most("max error, polynomial f", worst_poly, 1e-10),
        Metric::at_most("max error, ridge f", worst_other, 1e-6),
    ])
}

fn c2_kergin(cfg: &ValidateConfig) -> Result<Vec<Metric>> {
    let mut rng = cases(cfg.seed, 2);
    let (mut identity, mut subsets, mut taylor) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..200 {
        let n = rng.random_range(1..=3);
        let p = rng.random_range(1..=5);
        let pts: Vec<Vec<f64>> = (0..p).map(|_| random_point(&mut rng, n)).collect();

        let poly = random_poly(&mut rng, n, p - 1);
        let k = kergin(&poly, &pts)?;
        identity = identity.max(k.max_abs_diff(&poly) / poly.max_abs_coeff().max(1.0));

        let f = random_ridge(&mut rng, n);
        let k = kergin(&f, &pts)?;
        for mask in 1u32..(1 << p) {
            let sub: Vec<Vec<f64>> = (0..p).filter(|i| mask >> i & 1 == 1).map(|i| pts[i].clone()).collect();
            let a = divided_difference(&k, &sub)?;
            let b = divided_difference(&f, &sub)?;
            subsets = subsets.max(a.max_abs_diff(&b) / b.max_abs_coeff().max(1.0));
        }

        let q = random_poly(&mut rng, n, p + 1);
        let x = random_point(&mut rng, n);
        let k = kergin(&q, &vec![x.clone(); p])?;
        let t = taylor_poly(&poly_jet(&q, &x, p - 1)?, &x, p - 1)?;
        taylor = taylor.max(k.max_abs_diff(&t) / t.max_abs_coeff().max(1.0));
    }
    Ok(vec![
        Metric::at_most("identity on degree <= p-1", identity, 1e-9),
        Metric::at_most("subset divided differences", subsets, 1e-6),
        Metric::at_most("Taylor at coincident points", taylor, 1e-9),
    ])
}

fn c3_compatibility(cfg: &ValidateConfig) -> Result<Vec<Metric>> {
    let mut rng = cases(cfg.seed, 3);
    let mut failures = 0;
    let mut min_gap = f64::INFINITY;
    for _ in 0..50 {
        let n = rng.random_range(1..=2);
        let p = rng.random_range(2..=4);
        // draw the clustering first, then place one point per cluster
        let clusters = rng.random_range(1..=p);
        let centres: Vec<Vec<f64>> = (0..clusters).map(|_| random_point(&mut rng, n)).collect();
        let pts: Vec<Vec<f64>> =
            (0..p).map(|i| centres[if i < clusters { i } else { rng.random_range(0..clusters) }].clone()).collect();
        let config = Configuration::new(pts)?;
        let part = config.clustering_partition();
        let blocks: Vec<DMatrix<f64>> = part
            .cells()
            .iter()
            .map(|cell| kergin_matrix(config.restrict(cell)?.points(), p - 1))
            .collect::<Result<_>>()?;
        let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
        let want: usize = part.cells().iter().map(|c| basis_dim(n, c.len() - 1)).sum();
        let mut stacked = DMatrix::zeros(rows, basis_dim(n, p - 1));
        let mut at = 0;
        for b in &blocks {
            stacked.view_mut((at, 0), b.shape()).copy_from(b);
            at += b.nrows();
        }
        let ns = null_space(&stacked.transpose());
        if ns.rank != want || rows != want {
            failures += 1;
        }
        let sv = &ns.singular_values;
        min_gap = min_gap.min(sv[want.min(sv.len()) - 1] / sv[0]);
    }
    Ok(vec![
        Metric::equals("configs below full rank", failures, 0),
        Metric::at_least("smallest relative singular value", min_gap, 1e-10),
    ])
}

fn c4_geometry(cfg: &ValidateConfig) -> Result<Vec<Metric>> {
    let mut rng = cases(cfg.seed, 4);
    let (mut rank_failures, mut containment, mut intersect_failures) = (0usize, 0.0f64, 0usize);
    for _ in 0..100 {
        let n = rng.random_range(1..=3);
        let p = rng.random_range(1..=5);
        let config = Configuration::new((0..p).map(|_| random_point(&mut rng, n)).collect())?;
        if null_space(&eval_matrix(&config, p - 1).transpose()).rank != p {
            rank_failures += 1;
        }
        let g = ev_kernel(&config)?;
        for mask in 1u32..(1 << p) {
            let cell: Vec<usize> = (0..p).filter(|i| mask >> i & 1 == 1).collect();
            let (_, g_tilde) = ev_kernel_cluster(&config, &cell)?;
            containment = containment.max(g_tilde.containment_residual(&g)?);
        }
        // a random 2-cell partition of the points
        if p >= 2 {
            let cut = rng.random_range(1..p);
            let part = crate::configspace::Partition::new(p, vec![(0..cut).collect(), (cut..p).collect()])?;
            if !partition_intersection_check(&config, &part)?.passes(p, 1e-8) {
                intersect_failures += 1;
            }
        }
    }
    let mut theta_err = 0.0f64;
    for i in 0..=24 {
        let theta = 2.0 * PI * i as f64 / 24.0;
        let config = Configuration::new(vec![vec![0.0, 0.0], vec![theta.cos(), theta.sin()]])?;
        let want = Subspace::span(&DMatrix::from_column_slice(3, 1, &[0.0, theta.sin(), -theta.cos()]));
        theta_err = theta_err.max(subspace_angle(&ev_kernel(&config)?, &want)?);
    }
    Ok(vec![
        Metric::equals("configs with rank(ev) != p", rank_failures, 0),
        Metric::at_most("max containment residual", containment, 1e-9),
        Metric::equals("failed intersection reconstructions", intersect_failures, 0),
        Metric::at_most("max angle on the theta family", theta_err, 1e-10),
    ])
}

fn log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    weighted_line_fit(&lx, &ly, &vec![1.0; x.len()]).slope
}

fn c5_limits(cfg: &ValidateConfig) -> Result<Vec<Metric>> {
    let eps = log_spaced(1e-1, 1e-5, 9);
    let x2 = Subspace::span(&DMatrix::from_column_slice(3, 1, &[0.0, 0.0, 1.0]));
    let mut angles = Vec::new();
    for &e in &eps {
        let config = Configuration::new(vec![vec![0.0, 0.0], vec![e * e.cos(), e * e.sin()]])?;
        angles.push(subspace_angle(&ev_kernel(&config)?, &x2)?);
    }
    let spiral = log_slope(&eps, &angles);

    let mut rng = cases(cfg.seed, 5);
    let (mut worst, mut checked) = (0.0f64, 0usize);
    for _ in 0..1000 {
        if checked == 10 {
            break;
        }
        let f = random_ridge(&mut rng, 2);
        let x = random_point(&mut rng, 2);
        let phi = uniform(&mut rng, 0.0, 2.0 * PI);
        let u = vec![phi.cos(), phi.sin()];
        let limit = multijet2(&f, &Site2::Direction { x: x.clone(), u: u.clone() })?;
        let ts = log_spaced(1e-2, 1e-5, 4);
        let mut gaps = Vec::new();
        for &t in &ts {
            let y: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a + t * b).collect();
            let v = multijet2(&f, &Site2::Pair(x.clone(), y))?;
            gaps.push((v.0 - limit.0).abs().max((v.1 - limit.1).abs()));
        }
        // the gap is ½·uᵀD²f(x)u·t + O(t²); where that coefficient nearly
        // vanishes the O(t²) term leads and the fitted rate tends to 2
        let d2 = |a: u32, b: u32| f.deriv(&MultiIndex::new(vec![a, b]).expect("2-D"), &x);
        let curvature = d2(2, 0) * u[0] * u[0] + 2.0 * d2(1, 1) * u[0] * u[1] + d2(0, 2) * u[1] * u[1];
        if curvature.abs() >= 0.1 {
            checked += 1;
            worst = worst.max((log_slope(&ts, &gaps) - 1.0).abs());
        }
    }
    Ok(vec![
        Metric::at_most("spiral slope relative error", (spiral - 1.0).abs(), 0.05),
        Metric::at_most("multijet continuity slope deviation", worst, 0.05),
        Metric::equals("continuity cases checked", checked, 10),
    ])
}

fn c6_jacobians(cfg: &ValidateConfig) -> Result<Vec<Metric>> {
    let mut rng = cases(cfg.seed, 6);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(1..=6);
        let r = rng.random_range(1..=n);
        let m = DMatrix::from_fn(n, n, |_, _| uniform(&mut rng, -1.0, 1.0));
        let g = &m * m.transpose() + DMatrix::identity(n, n) * 0.1;
        let l = DMatrix::from_fn(r, n, |_, _| uniform(&mut rng, -1.0, 1.0));
        let ker = Subspace::new(null_space(&l).basis)?;
        let lhs = gamma_r(&g, &ker)? * jacobian(&l)?;
        let rhs = volume_density(&g)? * jacobian_g(&l, &g)?;
        worst = worst.max((lhs - rhs).abs() / rhs.abs());
    }
    Ok(vec![Metric::at_most("max relative deviation", worst, 1e-10)])
}

fn c7_nondegeneracy() -> Result<Vec<Metric>> {
    let mut metrics = Vec::new();
    for n in [1, 2] {
        let k = Kernel::bargmann_fock(n);
        let worst =
            (1..=3).map(|q| nondegeneracy_check(&k, q, 1).map(|r| r.min_eigenvalue)).collect::<Result<Vec<_>>>()?;
        let min = worst.into_iter().fold(f64::INFINITY, f64::min);
        metrics.push(Metric::at_least(&format!("Bargmann-Fock n={n} min eigenvalue, q <= 3"), min, 0.05));
    }
    let berry = Kernel::berry(2)?;
    let q1 = nondegeneracy_check(&berry, 1, 1)?;
    metrics.push(Metric::at_least("Berry q=1 min eigenvalue", q1.min_eigenvalue, 1e-8));
    let q2 = nondegeneracy_check(&berry, 2, 1)?;
    metrics.push(Metric::at_most("Berry q=2 min eigenvalue", q2.min_eigenvalue, 1e-8));
    // f + ∂₁₁f + ∂₂₂f = 0 in jet coordinates (f, ∂₁, ∂₂, ∂₁₁, ∂₁₂, ∂₂₂)
    let s = 1.0 / 3f64.sqrt();
    let pattern = [s, 0.0, 0.0, s, 0.0, s];
    let corr: f64 = q2.null_vector.iter().zip(pattern).map(|(a, b)| a * b).sum::<f64>().abs();
    metrics.push(Metric::at_least("Berry q=2 null vector correlation", corr, 0.999));
    Ok(metrics)
}

fn z_metric(name: &str, a: Estimate, b: Estimate) -> Metric {
    Metric::at_most(name, a.z_score(&b), 3.0)
}

fn c8_expectation(cfg: &ValidateConfig) -> Result<Vec<Metric>> {
    let k = Kernel::bargmann_fock(1);
    let rho = rho1(&k, 1, &[0.5], 0, 0)?;
    let rep = empirical_moments(&k, 1, &[(0.0, 1.0)], 1, cfg.trials, derive_seed(cfg.seed, 8))?;
    Ok(vec![
        Metric::at_most("|rho1 - 1/pi|", (rho.value - 1.0 / PI).abs(), 1e-12),
        z_metric("mean count z-score", rep.moments[0], Estimate::exact(1.0 / PI)),
    ])
}

fn c9_scaling(cfg: &ValidateConfig) -> Result<Vec<Metric>> {
    let eps = log_spaced(1e-1, 1e-3, 9);
    let seed = derive_seed(cfg.seed, 9);
    let mut metrics = Vec::new();
    for (n, want) in [(1usize, 1.0), (2, -1.0)] {
        let mut u = vec![0.0; n];
        u[0] = 1.0;
        let probe = diagonal_scaling_probe(&Kernel::bargmann_fock(n), &u, &eps, cfg.samples, seed)?;
        let slope = probe.fit.map_or(f64::NAN, |f| f.slope);
        metrics.push(Metric::within(&format!("slope n={n}"), slope, want - 0.15, want + 0.15));
    }
    Ok(metrics)
}

fn c10_second_moment(cfg: &ValidateConfig) -> Result<Vec<Metric>> {
    let k = Kernel::bargmann_fock(1);
    let seed = derive_seed(cfg.seed, 10);
    let bx = [(0.0, 1.0)];
    let icfg = IntegrationConfig { samples: cfg.samples, seed, ..IntegrationConfig::default() };
    let i1 = factorial_moment_integral(&k, 1, &bx, 1, &icfg)?.estimate;
    let i2 = factorial_moment_integral(&k, 1, &bx, 2, &icfg)?.estimate;
    let predicted = Estimate { value: i1.value + i2.value, std_error: i1.std_error + i2.std_error };
    let rep = empirical_moments(&k, 1, &bx, 2, cfg.trials, seed)?;
    Ok(vec![
        z_metric("E[N^2] z-score", rep.moments[1], predicted),
        z_metric("E[N(N-1)] z-score", rep.factorial_moments[1], i2),
    ])
}

fn c11_critical(cfg: &ValidateConfig) -> Result<Vec<Metric>> {
    let k = Kernel::bargmann_fock(1);
    let want = 3f64.sqrt() / PI;
    let deriv = rho1(&Kernel::derivative_field(&k)?, 1, &[0.5], 0, 0)?;
    let rep = critical_points_1d(&k, (0.0, 1.0), cfg.trials, derive_seed(cfg.seed, 11))?;
    Ok(vec![
        Metric::at_most("|rho1(f') - sqrt(3)/pi|", (deriv.value - want).abs(), 1e-10),
        z_metric("mean critical points z-score", rep.moments[0], Estimate::exact(want)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_criteria_pass() {
        let cfg = ValidateConfig::default();
        let (results, _) = run_criteria(&cfg, &[3, 4, 5, 6, 7]);
        for r in &results {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn failed_metric_fails_criterion() {
        let r = CriterionResult::new(1, "t", vec![Metric::at_most("x", 2.0, 1.0), Metric::at_least("y", 2.0, 1.0)]);
        assert!(!r.pass);
        assert!(!CriterionResult::new(1, "t", vec![]).pass);
    }
}
