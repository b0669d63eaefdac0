//! Stationary Gaussian covariance kernels, jet covariances, non-degeneracy
//! certification and exact sampling.

mod bessel;
mod jetcov;
mod kernel;
mod sample;

pub use bessel::{j0_radial, j0_radial_angular, j0_radial_series, SERIES_RADIUS};
pub use jetcov::{
    cov_entry, jet_covariance, jet_covariance_with, nondegeneracy_check, JetCov, JetIndex, NondegReport,
    NONDEG_THRESHOLD,
};
pub use kernel::{hermite_he, Kernel, KernelSpec, SpectralAtom, MAX_JET};
pub use sample::{sample_field, FieldSample, Sampler, JITTER};
