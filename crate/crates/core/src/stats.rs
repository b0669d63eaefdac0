//! Summation, sample statistics, bootstrap and weighted line fits.

use rand::Rng;
use serde::Serialize;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sum {
    sum: f64,
    comp: f64,
}

impl Sum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = Sum::default();
    xs.into_iter().for_each(|x| s.add(x));
    s.value()
}

/// Mean with standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, std_error: 0.0 }
    }

    /// |self − other| in units of the combined standard error
    /// (infinite if both are exact and differ).
    pub fn z_score(&self, other: &Estimate) -> f64 {
        let se = self.std_error.hypot(other.std_error);
        let d = (self.value - other.value).abs();
        if se == 0.0 {
            if d == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            d / se
        }
    }
}

/// Sample mean and its standard error s/√m.
pub fn mean_se(xs: &[f64]) -> Estimate {
    let m = xs.len() as f64;
    let mean = sum(xs.iter().copied()) / m;
    if xs.len() < 2 {
        return Estimate { value: mean, std_error: f64::NAN };
    }
    let var = sum(xs.iter().map(|x| (x - mean) * (x - mean))) / (m - 1.0);
    Estimate { value: mean, std_error: (var / m).sqrt() }
}

/// Bootstrap standard error of `stat` over `resamples` resamples with replacement.
pub fn bootstrap_se<R: Rng>(xs: &[f64], resamples: usize, rng: &mut R, stat: impl Fn(&[f64]) -> f64) -> f64 {
    let m = xs.len();
    let mut buf = vec![0.0; m];
    let values: Vec<f64> = (0..resamples)
        .map(|_| {
            for b in buf.iter_mut() {
                *b = xs[rng.random_range(0..m)];
            }
            stat(&buf)
        })
        .collect();
    mean_se(&values).std_error * (resamples as f64).sqrt()
}

/// Weighted least-squares line y = a + b·x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    pub slope_se: f64,
}

/// Fits with weights 1/σᵢ² (σᵢ = 0 entries get the smallest positive σ).
pub fn weighted_line_fit(x: &[f64], y: &[f64], sigma: &[f64]) -> LineFit {
    let floor = sigma.iter().copied().filter(|s| *s > 0.0).fold(f64::INFINITY, f64::min);
    let floor = if floor.is_finite() { floor } else { 1.0 };
    let w: Vec<f64> = sigma.iter().map(|s| 1.0 / s.max(floor).powi(2)).collect();
    let sw = sum(w.iter().copied());
    let sx = sum(w.iter().zip(x).map(|(w, x)| w * x));
    let sy = sum(w.iter().zip(y).map(|(w, y)| w * y));
    let (mx, my) = (sx / sw, sy / sw);
    let sxx = sum(w.iter().zip(x).map(|(w, x)| w * (x - mx) * (x - mx)));
    let sxy = sum(w.iter().zip(x).zip(y).map(|((w, x), y)| w * (x - mx) * (y - my)));
    let slope = sxy / sxx;
    LineFit { intercept: my - slope * mx, slope, slope_se: (1.0 / sxx).sqrt() }
}

/// m-point Gauss–Legendre nodes and weights on [−1, 1] (Newton on Pₘ).
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if m == 1 {
                p0 = 1.0;
                p1 = x;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre rule on [a, b]: `panels` equal panels of `m` nodes.
pub fn composite_gl(a: f64, b: f64, panels: usize, m: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(m);
    let h = (b - a) / panels as f64;
    (0..panels)
        .flat_map(|k| {
            let lo = a + k as f64 * h;
            x.iter().zip(&w).map(move |(xi, wi)| (lo + 0.5 * h * (xi + 1.0), 0.5 * h * wi)).collect::<Vec<_>>()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Domain};

    #[test]
    fn compensated_sum() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(sum(xs), 2.0);
    }

    #[test]
    fn mean_and_se() {
        let e = mean_se(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(e.value, 2.5);
        assert!((e.std_error - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn bootstrap_of_mean_tracks_analytic_se() {
        let mut rng = stream(1, Domain::Bootstrap, 0);
        let xs: Vec<f64> = (0..400).map(|i| ((i * 37) % 101) as f64).collect();
        let boot = bootstrap_se(&xs, 1000, &mut rng, |s| mean_se(s).value);
        let analytic = mean_se(&xs).std_error;
        assert!((boot / analytic - 1.0).abs() < 0.15, "{boot} vs {analytic}");
    }

    #[test]
    fn exact_line() {
        let x = [0.0, 1.0, 2.0];
        let y = [1.0, 3.0, 5.0];
        let f = weighted_line_fit(&x, &y, &[1.0, 1.0, 1.0]);
        assert!((f.slope - 2.0).abs() < 1e-14 && (f.intercept - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_exactness() {
        for m in 1..=10 {
            let (x, w) = gauss_legendre(m);
            for d in 0..2 * m {
                let got = sum(x.iter().zip(&w).map(|(x, w)| w * x.powi(d as i32)));
                let want = if d % 2 == 0 { 2.0 / (d + 1) as f64 } else { 0.0 };
                assert!((got - want).abs() < 1e-14, "m={m} d={d}");
            }
        }
        let q = composite_gl(0.0, 2.0, 3, 8);
        assert!((sum(q.iter().map(|(t, w)| w * t.exp())) - (2f64.exp() - 1.0)).abs() < 1e-13);
    }
}
