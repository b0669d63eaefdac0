use std::collections::HashMap;

use serde::Serialize;

use super::density::{rho1, stable_floor, JacModel, DEFAULT_MC_SAMPLES};
use crate::configspace::Partition;
use crate::error::{Error, Result, Warning};
use crate::gaussfield::Kernel;
use crate::stats::{composite_gl, mean_se, weighted_line_fit, Estimate};

/// Quadrature and sampling parameters for [`factorial_moment_integral`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegrationConfig {
    pub samples: usize,
    pub seed: u64,
    /// Composite Gauss–Legendre panels and nodes per panel, radial direction.
    pub panels: usize,
    pub nodes: usize,
    /// Same for the angular (n = 2) or second simplex (k = 3) direction.
    pub angular_panels: usize,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        IntegrationConfig { samples: DEFAULT_MC_SAMPLES, seed: 0, panels: 8, nodes: 8, angular_panels: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorialIntegral {
    pub k: usize,
    /// Quadrature part plus collar, with the Monte Carlo standard error.
    pub estimate: Estimate,
    /// Collar radius: the region within this distance of the diagonal is
    /// handled by the fitted power law instead of quadrature.
    pub collar_width: f64,
    pub collar: f64,
    pub fitted_exponent: Option<f64>,
    pub warnings: Vec<Warning>,
}

/// Stationary kernels only: ρ_k depends on differences of the sites.
fn side_lengths(bx: &[(f64, f64)], n: usize) -> Result<Vec<f64>> {
    if bx.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: bx.len() });
    }
    bx.iter()
        .map(|&(a, b)| if b > a { Ok(b - a) } else { Err(Error::InvalidInput(format!("empty box side [{a}, {b}]"))) })
        .collect()
}

/// Σ over quadrature nodes of wⱼ·∏Jac/denominator, kept per Monte Carlo draw
/// so that the standard error reflects the common random numbers.
fn crn_sum(kernel: &Kernel, r: usize, nodes: &[(Vec<Vec<f64>>, f64)], cfg: &IntegrationConfig) -> Result<Vec<f64>> {
    let mut acc = vec![0.0; cfg.samples];
    for (sites, w) in nodes {
        let model = match JacModel::new(kernel, r, sites) {
            Ok(m) => m,
            // only reachable in the k = 3 simplex corners, where ρ₃ vanishes for n = 1
            Err(Error::DegenerateConditioning { .. }) => continue,
            Err(e) => return Err(e),
        };
        let scale = w / model.denominator;
        for (a, s) in acc.iter_mut().zip(model.samples(cfg.samples, cfg.seed)) {
            *a += scale * s;
        }
    }
    Ok(acc)
}

/// Reciprocal condition number of Var(f(0), f(tu)) below which the Schur
/// complement of the derivative block has lost too many digits to trust:
/// its absolute error is about ε_mach/rcond against a signal of order rcond.
pub const ACCURATE_RCOND: f64 = 1e-6;

/// Power law ρ₂(0, tu) ≈ C·t^a fitted on [t_c/10, t_c].
fn collar_fit(kernel: &Kernel, r: usize, u: &[f64], t_c: f64, cfg: &IntegrationConfig) -> Result<(f64, f64)> {
    let n = u.len();
    let ts: Vec<f64> = (0..5).map(|i| 0.1 * t_c * 10f64.powf(0.25 * i as f64)).collect();
    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut s = Vec::new();
    for &t in &ts {
        let site: Vec<f64> = u.iter().map(|c| c * t).collect();
        let e = JacModel::new(kernel, r, &[vec![0.0; n], site])?.estimate(cfg.samples.min(20_000), cfg.seed);
        x.push(t.ln());
        y.push(e.value.ln());
        s.push(e.std_error / e.value);
    }
    let fit = weighted_line_fit(&x, &y, &s);
    Ok((fit.slope, fit.intercept.exp()))
}

/// ∫_{box^k} ρ_k for a stationary field, k ∈ {1, 2} (and k = 3 when n = 1).
///
/// The k-fold integral is reduced to site differences, integrated by
/// composite Gauss–Legendre away from the diagonal, and completed inside the
/// collar |t| < t_c by a power law fitted just outside it. t_c is ten times
/// the separation where Var(f(0), f(tu)) reaches [`ACCURATE_RCOND`].
pub fn factorial_moment_integral(
    kernel: &Kernel,
    r: usize,
    bx: &[(f64, f64)],
    k: usize,
    cfg: &IntegrationConfig,
) -> Result<FactorialIntegral> {
    let n = kernel.n();
    let sides = side_lengths(bx, n)?;
    let volume: f64 = sides.iter().product();
    if k == 1 {
        let centre: Vec<f64> = bx.iter().map(|(a, b)| 0.5 * (a + b)).collect();
        let d = rho1(kernel, r, &centre, cfg.samples, cfg.seed)?;
        let estimate = Estimate { value: d.value * volume, std_error: d.std_error * volume };
        return Ok(FactorialIntegral {
            k,
            estimate,
            collar_width: 0.0,
            collar: 0.0,
            fitted_exponent: None,
            warnings: vec![],
        });
    }
    match (k, n) {
        (2, 1) | (2, 2) | (3, 1) => {}
        _ => return Err(Error::InvalidInput(format!("factorial integral for k = {k}, n = {n} is not supported"))),
    }
    let mut u = vec![0.0; n];
    u[0] = 1.0;
    let t_c = 10.0 * stable_floor(kernel, &u, ACCURATE_RCOND)?;
    let (a, c) = collar_fit(kernel, r, &u, t_c, cfg)?;
    let mut warnings = Vec::new();
    let integrable = a > -(n as f64);
    if !integrable {
        warnings.push(Warning::Integrability { fitted_exponent: a });
    }

    let mut nodes: Vec<(Vec<Vec<f64>>, f64)> = Vec::new();
    let collar = match (k, n) {
        (2, 1) => {
            let l = sides[0];
            for (t, w) in composite_gl(t_c, l, cfg.panels, cfg.nodes) {
                nodes.push((vec![vec![0.0], vec![t]], 2.0 * (l - t) * w));
            }
            2.0 * c * (l * t_c.powf(a + 1.0) / (a + 1.0) - t_c.powf(a + 2.0) / (a + 2.0))
        }
        (2, 2) => {
            // ρ₂(0, t) = ρ₂(0, −t): integrate θ over [0, π) and double
            let (l1, l2) = (sides[0], sides[1]);
            for (theta, wt) in composite_gl(0.0, std::f64::consts::PI, cfg.angular_panels, cfg.nodes) {
                let (ct, st) = (theta.cos(), theta.sin());
                let reach = (l1 / ct.abs().max(1e-300)).min(l2 / st.abs().max(1e-300));
                if reach <= t_c {
                    continue;
                }
                for (rad, wr) in composite_gl(t_c, reach, cfg.panels, cfg.nodes) {
                    let overlap = (l1 - rad * ct.abs()) * (l2 - rad * st.abs());
                    nodes.push((vec![vec![0.0, 0.0], vec![rad * ct, rad * st]], 2.0 * overlap * rad * wr * wt));
                }
            }
            l1 * l2 * 2.0 * std::f64::consts::PI * c * t_c.powf(a + 2.0) / (a + 2.0)
        }
        _ => {
            // sites 0 < s·w < w with gaps (s·w, (1−s)·w); Duffy-type map of the simplex
            let l = sides[0];
            for (w, ww) in composite_gl(t_c, l, cfg.panels, cfg.nodes) {
                for (s, ws) in composite_gl(0.0, 1.0, cfg.angular_panels, cfg.nodes) {
                    nodes.push((vec![vec![0.0], vec![s * w], vec![w]], 6.0 * (l - w) * w * ww * ws));
                }
            }
            // the triple collar {w < t_c} has volume O(t_c²) and ρ₃ is bounded near it
            0.0
        }
    };
    let draws = crn_sum(kernel, r, &nodes, cfg)?;
    let q = mean_se(&draws);
    let collar = if integrable { collar } else { 0.0 };
    Ok(FactorialIntegral {
        k,
        estimate: Estimate { value: q.value + collar, std_error: q.std_error },
        collar_width: t_c,
        collar,
        fitted_exponent: Some(a),
        warnings,
    })
}

/// E[N^p] from factorial moments: for r = n every partition of {1..p}
/// contributes its block-count factorial moment; for r < n only the
/// discrete partition does. Standard errors add linearly.
pub fn moment_from_factorials(
    factorials: &HashMap<Partition, Estimate>,
    p: usize,
    point_process: bool,
) -> Result<Estimate> {
    let parts = if point_process { Partition::all(p) } else { vec![Partition::discrete(p)] };
    let mut value = 0.0;
    let mut se = 0.0;
    for part in parts {
        let e = factorials.get(&part).ok_or(Error::MissingPartition { blocks: part.len() })?;
        value += e.value;
        se += e.std_error;
    }
    Ok(Estimate { value, std_error: se })
}

/// Assigns `by_blocks[k − 1]` (the k-th factorial moment) to every partition
/// of {1..p} with k blocks.
pub fn factorials_by_block_count(p: usize, by_blocks: &[Estimate]) -> HashMap<Partition, Estimate> {
    Partition::all(p).into_iter().filter_map(|part| by_blocks.get(part.len() - 1).map(|e| (part, *e))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn first_factorial_moment_is_additive() {
        let k = Kernel::bargmann_fock(1);
        let cfg = IntegrationConfig::default();
        let one = factorial_moment_integral(&k, 1, &[(0.0, 1.0)], 1, &cfg).unwrap();
        let two = factorial_moment_integral(&k, 1, &[(0.0, 2.0)], 1, &cfg).unwrap();
        assert!((one.estimate.value - 1.0 / PI).abs() < 1e-15);
        assert!((two.estimate.value - 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn partition_assembly() {
        let f = factorials_by_block_count(2, &[Estimate::exact(0.3), Estimate::exact(0.1)]);
        assert!((moment_from_factorials(&f, 2, true).unwrap().value - 0.4).abs() < 1e-15);
        assert_eq!(moment_from_factorials(&f, 2, false).unwrap().value, 0.1);
        let one = factorials_by_block_count(1, &[Estimate { value: 0.7, std_error: 0.01 }]);
        assert_eq!(moment_from_factorials(&one, 1, true).unwrap(), Estimate { value: 0.7, std_error: 0.01 });
        // 5 partitions of {1,2,3}: one with 1 block, three with 2, one with 3
        let f3 = factorials_by_block_count(3, &[Estimate::exact(1.0), Estimate::exact(10.0), Estimate::exact(100.0)]);
        assert_eq!(moment_from_factorials(&f3, 3, true).unwrap().value, 131.0);
        let partial = factorials_by_block_count(3, &[Estimate::exact(1.0)]);
        assert_eq!(moment_from_factorials(&partial, 3, true), Err(Error::MissingPartition { blocks: 2 }));
    }

    #[test]
    fn unsupported_orders() {
        let k = Kernel::bargmann_fock(2);
        let r = factorial_moment_integral(&k, 2, &[(0.0, 1.0), (0.0, 1.0)], 3, &IntegrationConfig::default());
        assert!(matches!(r, Err(Error::InvalidInput(_))));
    }
}
