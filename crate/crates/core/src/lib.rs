//! Numerical machinery around multijets of functions on ℝⁿ:
//!
//! * [`polycore`]: multi-indices, dense polynomials, symmetric forms;
//! * [`interp`]: simplex divided differences and Kergin interpolation;
//! * [`configspace`]: evaluation maps, their kernels as Grassmannian points
//!   and their behaviour near the diagonal;
//! * [`gaussfield`]: stationary covariance kernels, jet covariances, sampling;
//! * [`kacrice`]: Kac–Rice densities and factorial moments of zero sets;
//! * [`empirics`]: zero counting on sampled fields;
//! * [`cli`] and [`validate`]: the `multijet` command-line tool.

// `!(x >= y)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod configspace;
pub mod empirics;
pub mod error;
pub mod gaussfield;
pub mod interp;
pub mod kacrice;
pub mod linalg;
pub mod polycore;
pub mod rng;
pub mod stats;
pub mod validate;

pub use error::{Error, Result, Warning};
