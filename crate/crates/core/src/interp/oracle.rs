use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polycore::{homogeneous, MultiIndex, Poly};

/// A function ℝⁿ → ℝ with exact partial derivatives up to `smoothness()`.
///
/// Implementations must be callable from several threads at once.
pub trait FnOracle: Sync {
    fn n(&self) -> usize;

    /// Highest derivative order `deriv` can deliver.
    fn smoothness(&self) -> usize;

    /// ∂^α f(x), for |α| ≤ smoothness.
    fn deriv(&self, alpha: &MultiIndex, x: &[f64]) -> f64;

    fn eval(&self, x: &[f64]) -> f64 {
        self.deriv(&MultiIndex::zero(self.n()), x)
    }

    /// Tensor entries ∂^α f(x), |α| = k, ordered as [`homogeneous`]`(n, k)`.
    fn differential(&self, k: usize, x: &[f64]) -> Vec<f64> {
        homogeneous(self.n(), k).iter().map(|a| self.deriv(a, x)).collect()
    }

    /// Polynomial oracles expose themselves so quadrature can be made exact.
    fn as_poly(&self) -> Option<&Poly> {
        None
    }
}

impl FnOracle for Poly {
    fn n(&self) -> usize {
        Poly::n(self)
    }

    fn smoothness(&self) -> usize {
        usize::MAX
    }

    fn deriv(&self, alpha: &MultiIndex, x: &[f64]) -> f64 {
        self.derivative(alpha).and_then(|p| p.eval(x)).unwrap_or(f64::NAN)
    }

    fn eval(&self, x: &[f64]) -> f64 {
        Poly::eval(self, x).unwrap_or(f64::NAN)
    }

    fn as_poly(&self) -> Option<&Poly> {
        Some(self)
    }
}

/// Univariate profile of a ridge function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Sin,
    Cos,
    Exp,
}

impl Profile {
    /// g^{(m)}(s).
    pub fn deriv(self, m: usize, s: f64) -> f64 {
        match self {
            Profile::Exp => s.exp(),
            Profile::Sin => match m % 4 {
                0 => s.sin(),
                1 => s.cos(),
                2 => -s.sin(),
                _ => -s.cos(),
            },
            Profile::Cos => match m % 4 {
                0 => s.cos(),
                1 => -s.sin(),
                2 => -s.cos(),
                _ => s.sin(),
            },
        }
    }
}

/// Built-in function registry: polynomials, ridge functions
/// x ↦ scale·g(w·x + b) with g ∈ {sin, cos, exp}, and finite sums.
#[derive(Debug, Clone, PartialEq)]
pub enum BuiltinFn {
    Poly(Poly),
    Ridge { profile: Profile, w: Vec<f64>, b: f64, scale: f64 },
    Sum(Vec<BuiltinFn>),
}

impl BuiltinFn {
    pub fn ridge(profile: Profile, w: Vec<f64>, b: f64) -> Self {
        BuiltinFn::Ridge { profile, w, b, scale: 1.0 }
    }

    /// Short ids usable on the command line: `sin`, `cos`, `exp` (n = 1),
    /// `x^k` (n = 1), `xy` (n = 2), `x^2+y` (n = 2).
    pub fn from_id(id: &str) -> Result<Self> {
        let mono = |n: usize, e: Vec<u32>| -> Result<BuiltinFn> {
            Ok(BuiltinFn::Poly(Poly::from_terms(n, &[(MultiIndex::new(e)?, 1.0)])?))
        };
        match id {
            "sin" => Ok(BuiltinFn::ridge(Profile::Sin, vec![1.0], 0.0)),
            "cos" => Ok(BuiltinFn::ridge(Profile::Cos, vec![1.0], 0.0)),
            "exp" => Ok(BuiltinFn::ridge(Profile::Exp, vec![1.0], 0.0)),
            "xy" => mono(2, vec![1, 1]),
            "x^2+y" => Ok(BuiltinFn::Poly(Poly::from_terms(
                2,
                &[(MultiIndex::new(vec![2, 0])?, 1.0), (MultiIndex::new(vec![0, 1])?, 1.0)],
            )?)),
            _ => {
                if let Some(k) = id.strip_prefix("x^").and_then(|k| k.parse::<u32>().ok()) {
                    mono(1, vec![k])
                } else if id == "x" {
                    mono(1, vec![1])
                } else {
                    Err(Error::UnknownFunction(id.to_string()))
                }
            }
        }
    }
}

impl FnOracle for BuiltinFn {
    fn n(&self) -> usize {
        match self {
            BuiltinFn::Poly(p) => p.n(),
            BuiltinFn::Ridge { w, .. } => w.len(),
            BuiltinFn::Sum(parts) => parts.first().map_or(1, |p| p.n()),
        }
    }

    fn smoothness(&self) -> usize {
        usize::MAX
    }

    fn deriv(&self, alpha: &MultiIndex, x: &[f64]) -> f64 {
        match self {
            BuiltinFn::Poly(p) => FnOracle::deriv(p, alpha, x),
            BuiltinFn::Ridge { profile, w, b, scale } => {
                let s: f64 = w.iter().zip(x).map(|(wi, xi)| wi * xi).sum::<f64>() + b;
                scale * alpha.monomial(w) * profile.deriv(alpha.order(), s)
            }
            BuiltinFn::Sum(parts) => parts.iter().map(|p| p.deriv(alpha, x)).sum(),
        }
    }

    fn differential(&self, k: usize, x: &[f64]) -> Vec<f64> {
        match self {
            BuiltinFn::Poly(p) => p.differential(k, x),
            _ => homogeneous(self.n(), k).iter().map(|a| self.deriv(a, x)).collect(),
        }
    }

    fn as_poly(&self) -> Option<&Poly> {
        match self {
            BuiltinFn::Poly(p) => Some(p),
            _ => None,
        }
    }
}

/// Caps the advertised smoothness of another oracle.
pub struct LimitedSmoothness<'a> {
    pub inner: &'a dyn FnOracle,
    pub max_order: usize,
}

impl FnOracle for LimitedSmoothness<'_> {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn smoothness(&self) -> usize {
        self.max_order.min(self.inner.smoothness())
    }

    fn deriv(&self, alpha: &MultiIndex, x: &[f64]) -> f64 {
        self.inner.deriv(alpha, x)
    }
}

/// Scalar-valued closure with a hand-written derivative oracle.
pub struct ClosureFn<F>
where
    F: Fn(&MultiIndex, &[f64]) -> f64 + Sync,
{
    pub n: usize,
    pub smoothness: usize,
    pub deriv: F,
}

impl<F> FnOracle for ClosureFn<F>
where
    F: Fn(&MultiIndex, &[f64]) -> f64 + Sync,
{
    fn n(&self) -> usize {
        self.n
    }

    fn smoothness(&self) -> usize {
        self.smoothness
    }

    fn deriv(&self, alpha: &MultiIndex, x: &[f64]) -> f64 {
        (self.deriv)(alpha, x)
    }
}
