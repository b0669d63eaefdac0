//! Kac–Rice densities of zero sets of Gaussian fields f : ℝⁿ → ℝʳ with
//! independent identically distributed components.

mod conditional;
mod density;
mod jacobian;
mod moments;

pub use conditional::{conditional_gaussian, psd_factor, rcond_sym, CondGaussian, RCOND_FLOOR};
pub use density::{
    diagonal_scaling_probe, pair_rcond, rho1, rho_p, stable_floor, DensityEstimate, Method, ScalingPoint, ScalingProbe,
    CHUNK, DEFAULT_MC_SAMPLES,
};
pub use jacobian::{chi_mean, gamma_r, jacobian, jacobian_g, volume_density, MetricField};
pub use moments::{
    factorial_moment_integral, factorials_by_block_count, moment_from_factorials, FactorialIntegral, IntegrationConfig,
    ACCURATE_RCOND,
};
