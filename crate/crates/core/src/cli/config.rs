//! Per-command experiment configs. Every field has a default, so each
//! command runs without `--config`; unknown fields are rejected.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussfield::KernelSpec;
use crate::interp::{BuiltinFn, Profile};
use crate::polycore::{MultiIndex, Poly};

/// Desk-scale limits, lifted by `--override-caps`.
pub const MAX_TRIALS: usize = 20_000;
pub const MAX_SAMPLES: usize = 1_000_000;
pub const MAX_POINTS: usize = 8;
pub const MAX_DIM: usize = 4;

/// A function from the built-in registry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    /// Short id, e.g. `"sin"`, `"x^3"`, `"xy"`.
    Id(String),
    /// Σ c·X^α from (α, c) pairs.
    Poly { n: usize, terms: Vec<(Vec<u32>, f64)> },
    /// scale·g(w·x + b).
    Ridge {
        profile: Profile,
        w: Vec<f64>,
        #[serde(default)]
        b: f64,
        #[serde(default = "one")]
        scale: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl FunctionSpec {
    pub fn build(&self) -> Result<BuiltinFn> {
        match self {
            FunctionSpec::Id(id) => BuiltinFn::from_id(id),
            FunctionSpec::Poly { n, terms } => {
                let terms: Vec<(MultiIndex, f64)> =
                    terms.iter().map(|(e, c)| Ok((MultiIndex::new(e.clone())?, *c))).collect::<Result<_>>()?;
                Ok(BuiltinFn::Poly(Poly::from_terms(*n, &terms)?))
            }
            FunctionSpec::Ridge { profile, w, b, scale } => {
                if w.is_empty() {
                    return Err(Error::InvalidInput("ridge direction w is empty".into()));
                }
                Ok(BuiltinFn::Ridge { profile: *profile, w: w.clone(), b: *b, scale: *scale })
            }
        }
    }
}

fn bargmann_fock(n: usize) -> KernelSpec {
    KernelSpec { name: "bargmann_fock".into(), n, parameters: serde_json::Value::Null }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InterpConfig {
    pub function: FunctionSpec,
    pub points: Vec<Vec<f64>>,
}

impl InterpConfig {
    pub fn divdiff_default() -> Self {
        InterpConfig { function: FunctionSpec::Id("x^2".into()), points: vec![vec![0.0], vec![1.0]] }
    }
}

impl Default for InterpConfig {
    fn default() -> Self {
        InterpConfig { function: FunctionSpec::Id("x^3".into()), points: vec![vec![0.0], vec![0.0], vec![1.0]] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KernelConfig {
    pub points: Vec<Vec<f64>>,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig { points: vec![vec![0.0, 0.0], vec![0.0, 1.0]] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitPath {
    /// ((0,0), (ε cos ε, ε sin ε)), tending to span(X₂).
    Spiral,
    /// ((0,0), (1,0)) for every ε.
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LimitConfig {
    pub path: LimitPath,
    pub eps_max: f64,
    pub eps_min: f64,
    pub count: usize,
}

impl Default for LimitConfig {
    fn default() -> Self {
        LimitConfig { path: LimitPath::Spiral, eps_max: 1e-1, eps_min: 1e-5, count: 9 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NondegConfig {
    pub kernel: KernelSpec,
    pub orders: Vec<usize>,
    pub components: usize,
}

impl Default for NondegConfig {
    fn default() -> Self {
        NondegConfig {
            kernel: KernelSpec { name: "berry".into(), n: 2, parameters: serde_json::Value::Null },
            orders: vec![1, 2],
            components: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RhoConfig {
    pub kernel: KernelSpec,
    pub r: usize,
    /// Each entry is a configuration; a single site gives ρ₁.
    pub configurations: Vec<Vec<Vec<f64>>>,
    pub samples: usize,
}

impl Default for RhoConfig {
    fn default() -> Self {
        RhoConfig {
            kernel: bargmann_fock(1),
            r: 1,
            configurations: vec![vec![vec![0.0]], vec![vec![0.0], vec![0.5]]],
            samples: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MomentsConfig {
    pub kernel: KernelSpec,
    pub r: usize,
    #[serde(rename = "box")]
    pub bx: Vec<(f64, f64)>,
    pub p: usize,
    pub trials: usize,
    pub samples: usize,
}

impl Default for MomentsConfig {
    fn default() -> Self {
        MomentsConfig { kernel: bargmann_fock(1), r: 1, bx: vec![(0.0, 1.0)], p: 2, trials: 5000, samples: 100_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Zeros,
    CriticalPoints,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulateConfig {
    pub kernel: KernelSpec,
    #[serde(rename = "box")]
    pub bx: Vec<(f64, f64)>,
    pub target: Target,
    pub trials: usize,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        SimulateConfig { kernel: bargmann_fock(1), bx: vec![(0.0, 1.0)], target: Target::Zeros, trials: 1000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ValidateOptions {
    pub trials: usize,
    pub samples: usize,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions { trials: 5000, samples: 100_000 }
    }
}

pub fn check_cap(what: &str, value: usize, cap: usize, override_caps: bool) -> Result<()> {
    if value > cap && !override_caps {
        return Err(Error::InvalidInput(format!("{what} = {value} exceeds the cap {cap}; pass --override-caps")));
    }
    Ok(())
}

pub fn check_points(points: &[Vec<f64>], override_caps: bool) -> Result<()> {
    check_cap("number of points", points.len(), MAX_POINTS, override_caps)?;
    if let Some(x) = points.first() {
        check_cap("dimension", x.len(), MAX_DIM, override_caps)?;
    }
    Ok(())
}
