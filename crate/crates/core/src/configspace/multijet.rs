use super::config::{distance, Configuration};
use super::kernels::ev_kernel;
use crate::error::{Error, Result};
use crate::interp::{kergin, FnOracle};
use crate::polycore::MultiIndex;

/// A point of the blown-up configuration space of two points.
#[derive(Debug, Clone, PartialEq)]
pub enum Site2 {
    /// Two points; they must be distinct.
    Pair(Vec<f64>, Vec<f64>),
    /// A point of the exceptional divisor: base x and unit direction u,
    /// the limit of (x₁, x₂) with x₁ → x and (x₂ − x₁)/‖x₂ − x₁‖ → u.
    Direction { x: Vec<f64>, u: Vec<f64> },
}

/// The 2-multijet in the Newton trivialization:
/// (f(x₁), (f(x₂) − f(x₁))/‖x₂ − x₁‖) off the diagonal, (f(x), D_x f·u) on it.
pub fn multijet2(f: &dyn FnOracle, site: &Site2) -> Result<(f64, f64)> {
    let n = f.n();
    let check = |x: &[f64]| (x.len() == n).then_some(()).ok_or(Error::DimensionMismatch { expected: n, got: x.len() });
    match site {
        Site2::Pair(x1, x2) => {
            check(x1)?;
            check(x2)?;
            let d = distance(x1, x2);
            if d == 0.0 {
                return Err(Error::InvalidInput("coincident points need a direction".into()));
            }
            let (v1, v2) = (f.eval(x1), f.eval(x2));
            Ok((v1, (v2 - v1) / d))
        }
        Site2::Direction { x, u } => {
            check(x)?;
            check(u)?;
            if f.smoothness() < 1 {
                return Err(Error::InsufficientSmoothness { needed: 1, available: f.smoothness() });
            }
            let norm = u.iter().map(|c| c * c).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidInput(format!("direction must be a unit vector, |u| = {norm}")));
            }
            let slope = (0..n).map(|i| u[i] * f.deriv(&MultiIndex::unit(n, i, 1), x)).sum();
            Ok((f.eval(x), slope))
        }
    }
}

/// Off-diagonal multijet (f(x₁), …, f(x_p)), together with
/// max |f(xᵢ) − K(f, x̄)(xᵢ)|, which should vanish.
pub fn multijet_offdiag(f: &dyn FnOracle, config: &Configuration) -> Result<(Vec<f64>, f64)> {
    if config.n() != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), got: config.n() });
    }
    ev_kernel(config)?;
    let values: Vec<f64> = config.points().iter().map(|x| f.eval(x)).collect();
    let k = kergin(f, config.points())?;
    let mut residual: f64 = 0.0;
    for (x, v) in config.points().iter().zip(&values) {
        residual = residual.max((k.eval(x)? - v).abs());
    }
    Ok((values, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::{BuiltinFn, Profile};
    use crate::polycore::Poly;

    #[test]
    fn examples_on_x2_plus_y() {
        let f = BuiltinFn::from_id("x^2+y").unwrap();
        let off = multijet2(&f, &Site2::Pair(vec![0.0, 0.0], vec![0.0, 1.0])).unwrap();
        assert_eq!(off, (0.0, 1.0));
        let on = multijet2(&f, &Site2::Direction { x: vec![0.0, 0.0], u: vec![0.0, 1.0] }).unwrap();
        assert_eq!(on, (0.0, 1.0));
    }

    #[test]
    fn constant_and_errors() {
        let c = Poly::constant(2, 0, 3.5);
        assert_eq!(multijet2(&c, &Site2::Pair(vec![1.0, 2.0], vec![0.0, -1.0])).unwrap(), (3.5, 0.0));
        let s = 0.5f64.sqrt();
        assert_eq!(multijet2(&c, &Site2::Direction { x: vec![1.0, 1.0], u: vec![s, s] }).unwrap().1, 0.0);
        let same = multijet2(&c, &Site2::Pair(vec![1.0, 1.0], vec![1.0, 1.0]));
        assert!(matches!(same, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn continuity_toward_blow_up() {
        let f = BuiltinFn::ridge(Profile::Sin, vec![1.3, -0.4], 0.2);
        let x = vec![0.3, -0.1];
        let u = vec![0.6, 0.8];
        let limit = multijet2(&f, &Site2::Direction { x: x.clone(), u: u.clone() }).unwrap();
        for t in [1e-2, 1e-3, 1e-4, 1e-5] {
            let x2: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a + t * b).collect();
            let v = multijet2(&f, &Site2::Pair(x.clone(), x2)).unwrap();
            assert_eq!(v.0, limit.0);
            assert!((v.1 - limit.1).abs() <= 2.0 * t, "t={t}");
        }
    }

    #[test]
    fn offdiag_examples() {
        let zero = Poly::zero(1, 0);
        let c = Configuration::new(vec![vec![0.0], vec![1.0]]).unwrap();
        assert_eq!(multijet_offdiag(&zero, &c).unwrap().0, vec![0.0, 0.0]);

        let sin = BuiltinFn::from_id("sin").unwrap();
        let c = Configuration::new(vec![vec![0.0], vec![std::f64::consts::PI]]).unwrap();
        let (v, residual) = multijet_offdiag(&sin, &c).unwrap();
        assert_eq!(v[0], 0.0);
        assert!(v[1].abs() < 1e-15);
        assert!(residual < 1e-8);
        // Lagrange line through (0, 0) and (π, sin π)
        let k = kergin(&sin, c.points()).unwrap();
        assert!(k.max_abs_coeff() < 1e-8);
    }
}
