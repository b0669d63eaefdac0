use super::oracle::FnOracle;
use super::simplex::{integrate_adaptive, SimplexRule};
use crate::error::{Error, Result};
use crate::polycore::{factorial, homogeneous, Poly, SymForm};

/// Absolute tolerance of the adaptive simplex quadrature used for
/// non-polynomial oracles.
pub const ADAPTIVE_TOL: f64 = 1e-9;

/// f[x₀,…,x_k] = ∫_{σ_k} D^k f(Σ tᵢxᵢ) dν_k(t), a symmetric k-linear form.
///
/// Polynomial oracles are integrated exactly by a Grundmann–Möller rule of
/// sufficient degree; other oracles go through adaptive bisection. Repeated
/// points need no special handling.
pub fn divided_difference(f: &dyn FnOracle, points: &[Vec<f64>]) -> Result<SymForm> {
    if points.is_empty() {
        return Err(Error::EmptyPoints);
    }
    let n = f.n();
    for x in points {
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x.len() });
        }
    }
    let k = points.len() - 1;
    if f.smoothness() < k {
        return Err(Error::InsufficientSmoothness { needed: k, available: f.smoothness() });
    }
    if k == 0 {
        return Ok(SymForm::scalar(n, f.eval(&points[0])));
    }
    let len = homogeneous(n, k).len();
    let position = |t: &[f64]| -> Vec<f64> {
        let mut y = vec![0.0; n];
        for (ti, x) in t.iter().zip(points) {
            for (yj, xj) in y.iter_mut().zip(x) {
                *yj += ti * xj;
            }
        }
        y
    };
    let coeffs = match f.as_poly() {
        Some(p) => {
            let derivs: Vec<Poly> = homogeneous(n, k).iter().map(|a| p.derivative(a)).collect::<Result<_>>()?;
            let degree = p.degree().saturating_sub(k);
            let rule = SimplexRule::with_exactness(k, degree);
            rule.integrate(len, |t| {
                let y = position(t);
                derivs.iter().map(|d| d.eval(&y).expect("dimension checked")).collect()
            })
        }
        None => integrate_adaptive(k, len, ADAPTIVE_TOL, |t| f.differential(k, &position(t))).value,
    };
    SymForm::from_coeffs(n, k, coeffs)
}

/// Classical (Hermite-extended) divided difference of a univariate function.
///
/// `jet(x, m)` returns f^{(m)}(x); it is only queried with m > 0 at points
/// that repeat, up to multiplicity − 1.
pub fn divdiff_1d_classical(points: &[f64], jet: &dyn Fn(f64, usize) -> Option<f64>) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::EmptyPoints);
    }
    let mut xs = points.to_vec();
    xs.sort_by(|a, b| a.total_cmp(b));
    let m = xs.len();
    let value = |x: f64| jet(x, 0).ok_or(Error::MissingDerivative { point: x, order: 0 });
    let mut col: Vec<f64> = xs.iter().map(|&x| value(x)).collect::<Result<_>>()?;
    for j in 1..m {
        let mut next = Vec::with_capacity(m - j);
        for i in 0..m - j {
            let (a, b) = (xs[i], xs[i + j]);
            if a == b {
                let d = jet(a, j).ok_or(Error::MissingDerivative { point: a, order: j })?;
                next.push(d / factorial(j));
            } else {
                next.push((col[i + 1] - col[i]) / (b - a));
            }
        }
        col = next;
    }
    Ok(col[0])
}

/// [`divdiff_1d_classical`] fed from an oracle on ℝ.
pub fn divdiff_1d_oracle(f: &dyn FnOracle, points: &[f64]) -> Result<f64> {
    if f.n() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: f.n() });
    }
    let smooth = f.smoothness();
    divdiff_1d_classical(points, &|x, m| {
        (m <= smooth).then(|| f.deriv(&crate::polycore::MultiIndex::unit(1, 0, m as u32), &[x]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::oracle::{BuiltinFn, LimitedSmoothness, Profile};

    fn pts(v: &[f64]) -> Vec<Vec<f64>> {
        v.iter().map(|&x| vec![x]).collect()
    }

    #[test]
    fn zeroth_order_is_value() {
        let f = BuiltinFn::ridge(Profile::Exp, vec![1.0, 2.0], 0.0);
        let dd = divided_difference(&f, &[vec![0.5, -0.25]]).unwrap();
        assert_eq!(dd.order(), 0);
        assert_eq!(dd.coeffs()[0], 1.0);
    }

    #[test]
    fn square_on_unit_interval() {
        let f = BuiltinFn::from_id("x^2").unwrap();
        let dd = divided_difference(&f, &pts(&[0.0, 1.0])).unwrap();
        assert!((dd.coeffs()[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cube_at_triple_point() {
        let f = BuiltinFn::from_id("x^3").unwrap();
        let dd = divided_difference(&f, &pts(&[1.0, 1.0, 1.0])).unwrap();
        assert!((dd.coeffs()[0] - 3.0).abs() < 1e-13);
    }

    #[test]
    fn xy_on_diagonal_segment() {
        let f = BuiltinFn::from_id("xy").unwrap();
        let dd = divided_difference(&f, &[vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap();
        assert!((dd.coeffs()[0] - 0.5).abs() < 1e-14);
        assert!((dd.coeffs()[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn errors() {
        let f = BuiltinFn::from_id("sin").unwrap();
        assert_eq!(divided_difference(&f, &[]), Err(Error::EmptyPoints));
        let capped = LimitedSmoothness { inner: &f, max_order: 1 };
        assert_eq!(
            divided_difference(&capped, &pts(&[0.0, 1.0, 2.0])),
            Err(Error::InsufficientSmoothness { needed: 2, available: 1 })
        );
    }

    #[test]
    fn classical_examples() {
        let sq = |x: f64, m: usize| {
            Some(match m {
                0 => x * x,
                1 => 2.0 * x,
                2 => 2.0,
                _ => 0.0,
            })
        };
        assert_eq!(divdiff_1d_classical(&[0.0, 1.0], &sq).unwrap(), 1.0);
        assert_eq!(divdiff_1d_classical(&[0.0, 1.0, 2.0], &sq).unwrap(), 1.0);
        assert_eq!(divdiff_1d_classical(&[3.0], &sq).unwrap(), 9.0);
        let values_only = |x: f64, m: usize| (m == 0).then_some(x * x);
        assert_eq!(
            divdiff_1d_classical(&[1.0, 1.0], &values_only),
            Err(Error::MissingDerivative { point: 1.0, order: 1 })
        );
    }

    #[test]
    fn ridge_divided_difference_factors_through_profile() {
        // f = sin(w·x + b) ⇒ f[x₀..x_k] has entries w^α · g[w·x₀+b, …, w·x_k+b].
        let w = vec![0.7, -1.3];
        let b = 0.4;
        let f = BuiltinFn::ridge(Profile::Sin, w.clone(), b);
        let points = vec![vec![0.1, 0.2], vec![-0.5, 0.9], vec![0.8, -0.3], vec![0.0, 0.6]];
        let dd = divided_difference(&f, &points).unwrap();
        let s: Vec<f64> = points.iter().map(|x| w[0] * x[0] + w[1] * x[1] + b).collect();
        let g = divdiff_1d_classical(&s, &|t, m| Some(Profile::Sin.deriv(m, t))).unwrap();
        for (alpha, c) in homogeneous(2, 3).iter().zip(dd.coeffs()) {
            let want = alpha.monomial(&w) * g;
            assert!((c - want).abs() < 1e-10, "{alpha}: {c} vs {want}");
        }
    }
}
