use serde::{Deserialize, Serialize};
use serde_json::json;

use super::bessel::j0_radial;
use crate::error::{Error, Result};
use crate::polycore::MultiIndex;

/// Highest jet order supported by the analytic kernels; derivatives of r are
/// available up to twice this.
pub const MAX_JET: usize = 6;

/// One atom ω ↦ w·δ_ξ of a symmetric spectral measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralAtom {
    pub weight: f64,
    pub frequency: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
enum Family {
    /// e^{−‖t‖²/2ℓ²}
    BargmannFock { n: usize, length_scale: f64 },
    /// cos(k t) for n = 1, J₀(k‖t‖) for n = 2.
    Berry { n: usize, wavenumber: f64 },
    /// Σ wᵢ cos(ξᵢ·t), weights normalized to sum 1.
    Spectral { n: usize, atoms: Vec<SpectralAtom> },
    /// Correlation of f′/‖f′‖ for a one-dimensional base field: r″(t)/r″(0).
    Derivative(Box<Kernel>),
}

/// Covariance t ↦ σ²·ρ(t) of a stationary centered Gaussian field on ℝⁿ,
/// with ρ(0) = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    family: Family,
    variance: f64,
}

/// JSON form of a kernel: `{"name": …, "n": …, "parameters": {…}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    pub name: String,
    pub n: usize,
    #[serde(default)]
    pub parameters: serde_json::Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BfParams {
    #[serde(default = "one")]
    length_scale: f64,
    #[serde(default = "one")]
    variance: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BerryParams {
    #[serde(default = "one")]
    wavenumber: f64,
    #[serde(default = "one")]
    variance: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectralParams {
    atoms: Vec<SpectralAtom>,
    #[serde(default = "one")]
    variance: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DerivativeParams {
    base: KernelSpec,
}

fn one() -> f64 {
    1.0
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidInput(format!("{name} must be positive and finite, got {v}")))
    }
}

impl Kernel {
    pub fn bargmann_fock(n: usize) -> Self {
        Kernel { family: Family::BargmannFock { n, length_scale: 1.0 }, variance: 1.0 }
    }

    pub fn bargmann_fock_scaled(n: usize, length_scale: f64) -> Result<Self> {
        positive("length_scale", length_scale)?;
        Ok(Kernel { family: Family::BargmannFock { n, length_scale }, variance: 1.0 })
    }

    /// n ∈ {1, 2}.
    pub fn berry(n: usize) -> Result<Self> {
        Self::berry_with(n, 1.0)
    }

    pub fn berry_with(n: usize, wavenumber: f64) -> Result<Self> {
        if !(1..=2).contains(&n) {
            return Err(Error::InvalidInput(format!("Berry kernel is implemented for n ∈ {{1, 2}}, got {n}")));
        }
        positive("wavenumber", wavenumber)?;
        Ok(Kernel { family: Family::Berry { n, wavenumber }, variance: 1.0 })
    }

    pub fn spectral(atoms: Vec<SpectralAtom>) -> Result<Self> {
        let n = atoms
            .first()
            .map(|a| a.frequency.len())
            .ok_or_else(|| Error::InvalidInput("spectral kernel needs at least one atom".into()))?;
        if n == 0 {
            return Err(Error::InvalidInput("atom frequencies must be non-empty".into()));
        }
        if let Some(a) = atoms.iter().find(|a| a.frequency.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: a.frequency.len() });
        }
        if atoms.iter().any(|a| !(a.weight >= 0.0)) {
            return Err(Error::InvalidInput("atom weights must be non-negative".into()));
        }
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        positive("total atom weight", total)?;
        let atoms =
            atoms.into_iter().map(|a| SpectralAtom { weight: a.weight / total, frequency: a.frequency }).collect();
        Ok(Kernel { family: Family::Spectral { n, atoms }, variance: 1.0 })
    }

    /// Kernel of the normalized derivative field of a one-dimensional field.
    pub fn derivative_field(base: &Kernel) -> Result<Self> {
        if base.n() != 1 {
            return Err(Error::InvalidInput("derivative field is implemented for n = 1".into()));
        }
        if base.max_jet() < 2 {
            return Err(Error::OrderExceeded { requested: 2, limit: base.max_jet() });
        }
        let b = base.correlation();
        let lambda2 = -b.corr_deriv(&MultiIndex::new(vec![2]).unwrap(), &[0.0]);
        positive("base second spectral moment", lambda2)?;
        Ok(Kernel { family: Family::Derivative(Box::new(b)), variance: 1.0 })
    }

    /// Same correlation, covariance multiplied by c² (the field c·f).
    pub fn scaled(&self, c: f64) -> Self {
        Kernel { family: self.family.clone(), variance: self.variance * c * c }
    }

    /// Unit-variance version.
    pub fn correlation(&self) -> Self {
        Kernel { family: self.family.clone(), variance: 1.0 }
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn n(&self) -> usize {
        match &self.family {
            Family::BargmannFock { n, .. } | Family::Berry { n, .. } | Family::Spectral { n, .. } => *n,
            Family::Derivative(_) => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match &self.family {
            Family::BargmannFock { .. } => "bargmann_fock",
            Family::Berry { .. } => "berry",
            Family::Spectral { .. } => "spectral",
            Family::Derivative(_) => "derivative",
        }
    }

    /// The one-dimensional unit-variance factor ρ₁ when ρ(t) = ∏ᵢ ρ₁(tᵢ).
    pub fn separable_factor(&self) -> Option<Kernel> {
        match &self.family {
            Family::BargmannFock { length_scale, .. } => {
                Some(Kernel { family: Family::BargmannFock { n: 1, length_scale: *length_scale }, variance: 1.0 })
            }
            _ => None,
        }
    }

    /// Largest jet order q for which jets up to q can be correlated.
    pub fn max_jet(&self) -> usize {
        match &self.family {
            Family::Derivative(b) => b.max_jet() - 1,
            _ => MAX_JET,
        }
    }

    /// A length over which correlations decay appreciably.
    pub fn correlation_length(&self) -> f64 {
        match &self.family {
            Family::BargmannFock { length_scale, .. } => *length_scale,
            Family::Berry { wavenumber, .. } => 1.0 / wavenumber,
            Family::Spectral { atoms, .. } => {
                let top =
                    atoms.iter().map(|a| a.frequency.iter().map(|x| x * x).sum::<f64>().sqrt()).fold(0.0, f64::max);
                if top > 0.0 {
                    1.0 / top
                } else {
                    1.0
                }
            }
            Family::Derivative(b) => b.correlation_length(),
        }
    }

    /// ∂^γ ρ(t) of the unit-variance correlation.
    pub fn corr_deriv(&self, gamma: &MultiIndex, t: &[f64]) -> f64 {
        match &self.family {
            Family::BargmannFock { length_scale, .. } => gamma
                .exponents()
                .iter()
                .zip(t)
                .map(|(&g, &ti)| {
                    let s = ti / length_scale;
                    let sign = if g % 2 == 0 { 1.0 } else { -1.0 };
                    sign * hermite_he(g as usize, s) * (-0.5 * s * s).exp() / length_scale.powi(g as i32)
                })
                .product(),
            Family::Berry { n: 1, wavenumber } => {
                let k = *wavenumber;
                let phase = k * t[0];
                let m = gamma.order();
                k.powi(m as i32) * cos_deriv(m, phase)
            }
            Family::Berry { wavenumber, .. } => {
                let k = *wavenumber;
                let u = [k * t[0], k * t[1]];
                k.powi(gamma.order() as i32) * j0_radial(gamma, &u)
            }
            Family::Spectral { atoms, .. } => {
                let m = gamma.order();
                atoms
                    .iter()
                    .map(|a| {
                        let phase: f64 = a.frequency.iter().zip(t).map(|(x, y)| x * y).sum();
                        a.weight * gamma.monomial(&a.frequency) * cos_deriv(m, phase)
                    })
                    .sum()
            }
            Family::Derivative(b) => {
                let m = gamma.order() as u32;
                let two = MultiIndex::new(vec![2]).unwrap();
                b.corr_deriv(&MultiIndex::new(vec![m + 2]).unwrap(), t) / b.corr_deriv(&two, &[0.0])
            }
        }
    }

    /// ∂^γ r(t) = σ²·∂^γ ρ(t).
    pub fn r_deriv(&self, gamma: &MultiIndex, t: &[f64]) -> f64 {
        self.variance * self.corr_deriv(gamma, t)
    }

    pub fn r_eval(&self, t: &[f64]) -> f64 {
        self.r_deriv(&MultiIndex::zero(self.n()), t)
    }

    pub fn from_spec(spec: &KernelSpec) -> Result<Self> {
        let params = if spec.parameters.is_null() { json!({}) } else { spec.parameters.clone() };
        let bad = |e: serde_json::Error| Error::InvalidInput(format!("kernel `{}` parameters: {e}", spec.name));
        if spec.n == 0 {
            return Err(Error::InvalidInput("kernel dimension n must be ≥ 1".into()));
        }
        let k = match spec.name.as_str() {
            "bargmann_fock" => {
                let p: BfParams = serde_json::from_value(params).map_err(bad)?;
                Self::bargmann_fock_scaled(spec.n, p.length_scale)?.with_variance(p.variance)?
            }
            "berry" => {
                let p: BerryParams = serde_json::from_value(params).map_err(bad)?;
                Self::berry_with(spec.n, p.wavenumber)?.with_variance(p.variance)?
            }
            "spectral" => {
                let p: SpectralParams = serde_json::from_value(params).map_err(bad)?;
                Self::spectral(p.atoms)?.with_variance(p.variance)?
            }
            "derivative" => {
                let p: DerivativeParams = serde_json::from_value(params).map_err(bad)?;
                Self::derivative_field(&Self::from_spec(&p.base)?)?
            }
            other => return Err(Error::InvalidInput(format!("unknown kernel `{other}`"))),
        };
        if k.n() != spec.n {
            return Err(Error::DimensionMismatch { expected: spec.n, got: k.n() });
        }
        Ok(k)
    }

    fn with_variance(mut self, v: f64) -> Result<Self> {
        self.variance = positive("variance", v)?;
        Ok(self)
    }

    pub fn spec(&self) -> KernelSpec {
        let parameters = match &self.family {
            Family::BargmannFock { length_scale, .. } => {
                json!({"length_scale": length_scale, "variance": self.variance})
            }
            Family::Berry { wavenumber, .. } => json!({"wavenumber": wavenumber, "variance": self.variance}),
            Family::Spectral { atoms, .. } => json!({"atoms": atoms, "variance": self.variance}),
            Family::Derivative(b) => json!({"base": b.spec()}),
        };
        KernelSpec { name: self.name().to_string(), n: self.n(), parameters }
    }
}

/// Probabilists' Hermite polynomial He_m(x).
pub fn hermite_he(m: usize, x: f64) -> f64 {
    let (mut a, mut b) = (1.0, x);
    if m == 0 {
        return a;
    }
    for k in 1..m {
        let c = x * b - k as f64 * a;
        a = b;
        b = c;
    }
    b
}

fn cos_deriv(m: usize, phase: f64) -> f64 {
    match m % 4 {
        0 => phase.cos(),
        1 => -phase.sin(),
        2 => -phase.cos(),
        _ => phase.sin(),
    }
}
