//! Quadrature on the standard k-simplex σ_k = {t ∈ [0,1]^{k+1} : Σ tᵢ = 1},
//! with the measure ν_k normalized so that ν_k(σ_k) = 1/k!.

use crate::polycore::{factorial, homogeneous};

/// Grundmann–Möller rule on σ_k. Nodes are barycentric (k+1)-tuples.
#[derive(Debug, Clone)]
pub struct SimplexRule {
    k: usize,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
    exactness_degree: usize,
}

impl SimplexRule {
    /// Grundmann–Möller rule of index `s`, exact for total degree 2s+1.
    pub fn grundmann_moller(k: usize, s: usize) -> Self {
        if k == 0 {
            return SimplexRule { k, nodes: vec![vec![1.0]], weights: vec![1.0], exactness_degree: usize::MAX };
        }
        let d = 2 * s + 1;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for i in 0..=s {
            let denom = (d + k - 2 * i) as f64;
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let w = sign * 2f64.powi(-2 * s as i32) * denom.powi(d as i32) / (factorial(i) * factorial(d + k - i));
            for beta in homogeneous(k + 1, s - i) {
                nodes.push(beta.exponents().iter().map(|&b| (2 * b + 1) as f64 / denom).collect());
                weights.push(w);
            }
        }
        SimplexRule { k, nodes, weights, exactness_degree: d }
    }

    /// Cheapest Grundmann–Möller rule integrating total degree `degree` exactly.
    pub fn with_exactness(k: usize, degree: usize) -> Self {
        let s = degree.saturating_sub(1).div_ceil(2);
        Self::grundmann_moller(k, s)
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exactness_degree(&self) -> usize {
        self.exactness_degree
    }

    /// ∫_{σ_k} g dν_k for a vector-valued integrand of length `len`.
    pub fn integrate<G>(&self, len: usize, g: G) -> Vec<f64>
    where
        G: Fn(&[f64]) -> Vec<f64>,
    {
        let identity = SubSimplex::root(self.k);
        self.integrate_on(&identity, len, &g)
    }

    fn integrate_on<G>(&self, cell: &SubSimplex, len: usize, g: &G) -> Vec<f64>
    where
        G: Fn(&[f64]) -> Vec<f64>,
    {
        let mut acc = vec![0.0; len];
        let mut t = vec![0.0; self.k + 1];
        for (node, &w) in self.nodes.iter().zip(&self.weights) {
            cell.map(node, &mut t);
            for (a, v) in acc.iter_mut().zip(g(&t)) {
                *a += w * v;
            }
        }
        let scale = cell.fraction;
        acc.iter_mut().for_each(|a| *a *= scale);
        acc
    }
}

/// Closed-form Dirichlet moment ∫_{σ_k} Π tᵢ^{aᵢ} dν_k = Π aᵢ! / (|a| + k)!.
pub fn dirichlet_moment(exponents: &[u32]) -> f64 {
    let k = exponents.len() - 1;
    let total: usize = exponents.iter().map(|&a| a as usize).sum();
    exponents.iter().map(|&a| factorial(a as usize)).product::<f64>() / factorial(total + k)
}

/// A sub-simplex of σ_k given by barycentric vertices, with its share of ν_k.
#[derive(Debug, Clone)]
struct SubSimplex {
    vertices: Vec<Vec<f64>>,
    fraction: f64,
}

impl SubSimplex {
    fn root(k: usize) -> Self {
        let vertices = (0..=k).map(|i| (0..=k).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        SubSimplex { vertices, fraction: 1.0 }
    }

    fn map(&self, lambda: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (l, v) in lambda.iter().zip(&self.vertices) {
            for (o, vi) in out.iter_mut().zip(v) {
                *o += l * vi;
            }
        }
    }

    /// Splits the longest edge at its midpoint.
    fn bisect(&self) -> (SubSimplex, SubSimplex) {
        let m = self.vertices.len();
        let (mut best, mut len) = ((0, 1), -1.0);
        for i in 0..m {
            for j in i + 1..m {
                let d: f64 = self.vertices[i].iter().zip(&self.vertices[j]).map(|(a, b)| (a - b) * (a - b)).sum();
                if d > len {
                    len = d;
                    best = (i, j);
                }
            }
        }
        let (i, j) = best;
        let mid: Vec<f64> = self.vertices[i].iter().zip(&self.vertices[j]).map(|(a, b)| 0.5 * (a + b)).collect();
        let mut left = self.clone();
        let mut right = self.clone();
        left.vertices[j] = mid.clone();
        right.vertices[i] = mid;
        left.fraction *= 0.5;
        right.fraction *= 0.5;
        (left, right)
    }
}

/// Outcome of [`integrate_adaptive`].
#[derive(Debug, Clone)]
pub struct AdaptiveResult {
    pub value: Vec<f64>,
    pub error_estimate: f64,
    pub cells: usize,
}

const ADAPTIVE_LOW_INDEX: usize = 4;
const ADAPTIVE_MAX_CELLS: usize = 4096;

/// Adaptive bisection on σ_k for smooth integrands: each cell compares the
/// degree-9 and degree-11 Grundmann–Möller rules and is split until the
/// discrepancy falls below its measure-weighted share of `abs_tol`.
pub fn integrate_adaptive<G>(k: usize, len: usize, abs_tol: f64, g: G) -> AdaptiveResult
where
    G: Fn(&[f64]) -> Vec<f64>,
{
    let low = SimplexRule::grundmann_moller(k, ADAPTIVE_LOW_INDEX);
    let high = SimplexRule::grundmann_moller(k, ADAPTIVE_LOW_INDEX + 1);
    if k == 0 {
        return AdaptiveResult { value: high.integrate(len, &g), error_estimate: 0.0, cells: 1 };
    }
    let mut value = vec![0.0; len];
    let mut error_estimate = 0.0;
    let mut cells = 0;
    let mut stack = vec![SubSimplex::root(k)];
    while let Some(cell) = stack.pop() {
        let hi = high.integrate_on(&cell, len, &g);
        let lo = low.integrate_on(&cell, len, &g);
        let err = hi.iter().zip(&lo).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let budget = abs_tol * cell.fraction;
        let open = cells + stack.len() + 2;
        if err <= budget || open > ADAPTIVE_MAX_CELLS {
            value.iter_mut().zip(&hi).for_each(|(v, h)| *v += h);
            error_estimate += err;
            cells += 1;
        } else {
            let (a, b) = cell.bisect();
            stack.push(a);
            stack.push(b);
        }
    }
    AdaptiveResult { value, error_estimate, cells }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_simplex_mass() {
        for k in 0..=6 {
            for s in 0..=5 {
                let rule = SimplexRule::grundmann_moller(k, s);
                let total: f64 = rule.weights().iter().sum();
                assert!((total - 1.0 / factorial(k)).abs() < 1e-14, "k={k} s={s} total={total}");
            }
        }
    }

    #[test]
    fn exact_on_dirichlet_monomials() {
        for k in 1..=5 {
            for s in 0..=5 {
                let rule = SimplexRule::grundmann_moller(k, s);
                for deg in 0..=rule.exactness_degree() {
                    for a in homogeneous(k + 1, deg) {
                        let e = a.exponents();
                        let got = rule
                            .integrate(1, |t| vec![t.iter().zip(e).map(|(ti, &ai)| ti.powi(ai as i32)).product()])[0];
                        let want = dirichlet_moment(e);
                        assert!((got - want).abs() <= 1e-12 * want.abs(), "k={k} s={s} a={a} got={got} want={want}");
                    }
                }
            }
        }
    }

    #[test]
    fn adaptive_handles_oscillatory_integrand() {
        // ∫₀¹ cos(40 t) dt on σ₁
        let r = integrate_adaptive(1, 1, 1e-9, |t| vec![(40.0 * t[1]).cos()]);
        let want = (40.0f64).sin() / 40.0;
        assert!((r.value[0] - want).abs() < 1e-9, "{} vs {want}", r.value[0]);
        assert!(r.cells > 1);
    }
}
