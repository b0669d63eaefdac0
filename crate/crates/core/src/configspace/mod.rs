//! Configurations of points, evaluation-map kernels as Grassmannian points,
//! and their behaviour near the diagonal.

mod config;
mod grassmann;
mod kernels;
mod multijet;

pub use config::{Configuration, Partition};
pub use grassmann::{subspace_angle, Subspace};
pub use kernels::{
    ev_kernel, ev_kernel_cluster, eval_matrix, limit_probe, log_spaced, partition_intersection_check,
    IntersectionReport, ProbeRow,
};
pub use multijet::{multijet2, multijet_offdiag, Site2};
