use rayon::prelude::*;
use serde::Serialize;

use super::field::{PathSampler, PlaneSampler, SPACING};
use super::zeros::{find_zeros_1d, find_zeros_2d_points};
use crate::error::{Error, Result, Warning};
use crate::gaussfield::Kernel;
use crate::kacrice::rho1;
use crate::rng::{stream, Domain};
use crate::stats::{bootstrap_se, mean_se, sum, Estimate};

/// Below this |Jac| a zero is flagged as (numerically) degenerate.
pub const BULINSKAYA_THRESHOLD: f64 = 1e-6;
pub const BOOTSTRAP_RESAMPLES: usize = 1000;
pub const REFINE_STEPS: usize = 60;
pub const NEWTON_STEPS: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BulinskayaReport {
    pub zeros: usize,
    pub min_jacobian: Option<f64>,
    pub flagged: usize,
    pub flag_rate: f64,
}

/// Summary of |Jac| at zeros, flagging those below [`BULINSKAYA_THRESHOLD`].
pub fn bulinskaya_diagnostic(jacobians: impl IntoIterator<Item = f64>) -> BulinskayaReport {
    let mut zeros = 0;
    let mut flagged = 0;
    let mut min: Option<f64> = None;
    for j in jacobians {
        let j = j.abs();
        zeros += 1;
        if j < BULINSKAYA_THRESHOLD {
            flagged += 1;
        }
        min = Some(min.map_or(j, |m: f64| m.min(j)));
    }
    let flag_rate = if zeros == 0 { 0.0 } else { flagged as f64 / zeros as f64 };
    BulinskayaReport { zeros, min_jacobian: min, flagged, flag_rate }
}

/// Zero counts of independent trials with the diagnostics gathered on the way.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountRun {
    pub counts: Vec<u64>,
    pub bulinskaya: BulinskayaReport,
    pub warnings: Vec<Warning>,
}

struct Trial {
    count: u64,
    jacobians: Vec<f64>,
    crowded: usize,
    fallback: usize,
}

fn merge(trials: Vec<Trial>) -> CountRun {
    let crowded: usize = trials.iter().map(|t| t.crowded).sum();
    let fallback: usize = trials.iter().map(|t| t.fallback).sum();
    let mut warnings = Vec::new();
    if crowded > 0 {
        warnings.push(Warning::Resolution { cells: crowded });
    }
    if fallback > 0 {
        warnings.push(Warning::NewtonFallback { cells: fallback });
    }
    let bulinskaya = bulinskaya_diagnostic(trials.iter().flat_map(|t| t.jacobians.iter().copied()));
    CountRun { counts: trials.iter().map(|t| t.count).collect(), bulinskaya, warnings }
}

/// Counts zeros of a 1-D path (`order` = 0) or of its derivative (`order` = 1)
/// in [a, b), trial t drawn from stream (seed, Empirics, t).
pub fn count_zeros_1d(kernel: &Kernel, bx: (f64, f64), order: u32, trials: usize, seed: u64) -> Result<CountRun> {
    let sampler = PathSampler::new(kernel, bx, SPACING, &[order, order + 1])?;
    let results: Result<Vec<Trial>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let draw = sampler.draw(&mut stream(seed, Domain::Empirics, t as u64));
            let z = find_zeros_1d(&sampler.grid(&draw, order)?, REFINE_STEPS);
            Ok(Trial { count: z.count() as u64, jacobians: z.derivatives, crowded: z.crowded_cells, fallback: 0 })
        })
        .collect();
    Ok(merge(results?))
}

/// Counts common zeros of two independent copies of a planar field.
pub fn count_zeros_2d(kernel: &Kernel, bx: [(f64, f64); 2], trials: usize, seed: u64) -> Result<CountRun> {
    let sampler = PlaneSampler::new(kernel, bx, SPACING)?;
    let results: Result<Vec<Trial>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let grid = sampler.grid(&mut stream(seed, Domain::Empirics, t as u64))?;
            let z = find_zeros_2d_points(&grid, NEWTON_STEPS);
            Ok(Trial { count: z.count() as u64, jacobians: z.jacobians, crowded: 0, fallback: z.fallback_cells })
        })
        .collect();
    Ok(merge(results?))
}

/// One empirical-versus-predicted check at three standard errors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub label: String,
    pub empirical: Estimate,
    pub predicted: Estimate,
    pub z: f64,
    pub pass: bool,
}

impl Comparison {
    pub fn new(label: &str, empirical: Estimate, predicted: Estimate) -> Self {
        let z = empirical.z_score(&predicted);
        Comparison { label: label.to_string(), empirical, predicted, z, pass: z <= 3.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub kernel: String,
    pub n: usize,
    pub r: usize,
    pub window: Vec<(f64, f64)>,
    pub p: usize,
    pub trials: usize,
    pub seed: u64,
    /// E[N^k], k = 1..=p.
    pub moments: Vec<Estimate>,
    /// E[N(N−1)…(N−k+1)], k = 1..=p.
    pub factorial_moments: Vec<Estimate>,
    pub variance: Estimate,
    /// Kac–Rice predictions attached by the caller.
    pub comparisons: Vec<Comparison>,
    pub bulinskaya: BulinskayaReport,
    pub warnings: Vec<Warning>,
}

impl MomentReport {
    pub fn from_counts(kernel: &Kernel, r: usize, window: Vec<(f64, f64)>, p: usize, seed: u64, run: CountRun) -> Self {
        let xs: Vec<f64> = run.counts.iter().map(|&c| c as f64).collect();
        let mut moments = Vec::with_capacity(p);
        let mut factorial_moments = Vec::with_capacity(p);
        for k in 1..=p {
            let pow = |v: &[f64]| sum(v.iter().map(|x| x.powi(k as i32))) / v.len() as f64;
            let fall =
                |v: &[f64]| sum(v.iter().map(|x| (0..k).map(|j| x - j as f64).product::<f64>())) / v.len() as f64;
            if k == 1 {
                let e = mean_se(&xs);
                moments.push(e);
                factorial_moments.push(e);
            } else {
                let mut rng = stream(seed, Domain::Bootstrap, k as u64);
                let se = bootstrap_se(&xs, BOOTSTRAP_RESAMPLES, &mut rng, pow);
                moments.push(Estimate { value: pow(&xs), std_error: se });
                let se = bootstrap_se(&xs, BOOTSTRAP_RESAMPLES, &mut rng, fall);
                factorial_moments.push(Estimate { value: fall(&xs), std_error: se });
            }
        }
        let var = |v: &[f64]| {
            let m = sum(v.iter().copied()) / v.len() as f64;
            sum(v.iter().map(|x| (x - m) * (x - m))) / (v.len() as f64 - 1.0)
        };
        let var_se = bootstrap_se(&xs, BOOTSTRAP_RESAMPLES, &mut stream(seed, Domain::Bootstrap, 0), var);
        MomentReport {
            kernel: kernel.name().to_string(),
            n: kernel.n(),
            r,
            window,
            p,
            trials: xs.len(),
            seed,
            moments,
            factorial_moments,
            variance: Estimate { value: var(&xs), std_error: var_se },
            comparisons: vec![],
            bulinskaya: run.bulinskaya,
            warnings: run.warnings,
        }
    }

    pub fn compare(&mut self, label: &str, empirical: Estimate, predicted: Estimate) -> &Comparison {
        self.comparisons.push(Comparison::new(label, empirical, predicted));
        self.comparisons.last().expect("just pushed")
    }

    pub fn all_pass(&self) -> bool {
        self.comparisons.iter().all(|c| c.pass)
    }
}

/// Sample moments of the zero count of r = n independent copies of the
/// field over a box, for n ∈ {1, 2}.
pub fn empirical_moments(
    kernel: &Kernel,
    r: usize,
    bx: &[(f64, f64)],
    p_max: usize,
    trials: usize,
    seed: u64,
) -> Result<MomentReport> {
    if trials < 2 || p_max == 0 {
        return Err(Error::InvalidInput("need at least 2 trials and p ≥ 1".into()));
    }
    let n = kernel.n();
    if r != n {
        return Err(Error::InvalidInput(format!("zero counting needs r = n, got r = {r}, n = {n}")));
    }
    if bx.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: bx.len() });
    }
    let run = match n {
        1 => count_zeros_1d(kernel, bx[0], 0, trials, seed)?,
        2 => count_zeros_2d(kernel, [bx[0], bx[1]], trials, seed)?,
        _ => return Err(Error::InvalidInput(format!("zero counting implemented for n ≤ 2, got {n}"))),
    };
    Ok(MomentReport::from_counts(kernel, r, bx.to_vec(), p_max, seed, run))
}

/// Critical points of a 1-D field as zeros of f′, compared with the
/// Kac–Rice mean computed on the derivative field.
pub fn critical_points_1d(kernel: &Kernel, bx: (f64, f64), trials: usize, seed: u64) -> Result<MomentReport> {
    if kernel.max_jet() < 2 {
        return Err(Error::OrderExceeded { requested: 2, limit: kernel.max_jet() });
    }
    let run = count_zeros_1d(kernel, bx, 1, trials, seed)?;
    let mut report = MomentReport::from_counts(kernel, 1, vec![bx], 2, seed, run);
    let deriv = Kernel::derivative_field(kernel)?;
    let density = rho1(&deriv, 1, &[0.5 * (bx.0 + bx.1)], 0, seed)?;
    let predicted = Estimate { value: density.value * (bx.1 - bx.0), std_error: density.std_error * (bx.1 - bx.0) };
    let mean = report.moments[0];
    report.compare("mean critical points", mean, predicted);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::empirics::zeros::Grid1D;
    use crate::gaussfield::SpectralAtom;

    #[test]
    fn bulinskaya_flags_tangential_zero() {
        let g = Grid1D::from_fn(-1.0, 1.0, 100, |x| x * x, |x| 2.0 * x).unwrap();
        let z = find_zeros_1d(&g, 60);
        assert_eq!(z.zeros, vec![0.0]);
        assert_eq!(bulinskaya_diagnostic(z.derivatives).flagged, 1);
        let g = Grid1D::from_fn(-1.0, 1.0, 100, |x| x, |_| 1.0).unwrap();
        let r = bulinskaya_diagnostic(find_zeros_1d(&g, 60).derivatives);
        assert_eq!((r.zeros, r.flagged), (1, 0));
    }

    #[test]
    fn sinusoid_has_two_zeros_per_period() {
        let k = Kernel::spectral(vec![SpectralAtom { weight: 1.0, frequency: vec![1.0] }]).unwrap();
        let tau = 2.0 * std::f64::consts::PI;
        let rep = empirical_moments(&k, 1, &[(0.0, tau)], 2, 200, 4).unwrap();
        assert!(rep.variance.value <= 0.26, "{:?}", rep.variance);
        assert!((rep.moments[0].value - 2.0).abs() < 0.05, "{:?}", rep.moments[0]);
        let crit = critical_points_1d(&k, (0.0, tau), 200, 4).unwrap();
        assert!((crit.moments[0].value - 2.0).abs() < 0.05);
    }

    #[test]
    fn reports_are_deterministic() {
        let k = Kernel::bargmann_fock(1);
        let a = empirical_moments(&k, 1, &[(0.0, 1.0)], 2, 64, 9).unwrap();
        let b = empirical_moments(&k, 1, &[(0.0, 1.0)], 2, 64, 9).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn zeros_and_critical_points_interleave() {
        let k = Kernel::bargmann_fock(1);
        let s = PathSampler::new(&k, (0.0, 3.0), SPACING, &[0, 1, 2]).unwrap();
        for t in 0..50 {
            let d = s.draw(&mut stream(5, Domain::Empirics, t));
            let zeros = find_zeros_1d(&s.grid(&d, 0).unwrap(), 60).count() as i64;
            let crit = find_zeros_1d(&s.grid(&d, 1).unwrap(), 60).count() as i64;
            // between consecutive zeros there is a critical point
            assert!(crit >= zeros - 1, "trial {t}: {zeros} zeros, {crit} critical points");
        }
    }
}
