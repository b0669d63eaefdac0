//! Zero counting on sampled Gaussian paths and planar fields, and the
//! empirical moments that the Kac–Rice side is checked against.

mod field;
mod report;
mod zeros;

pub use field::{PathSampler, PlaneSampler, DENSE_LIMIT, SPACING};
pub use report::{
    bulinskaya_diagnostic, count_zeros_1d, count_zeros_2d, critical_points_1d, empirical_moments, BulinskayaReport,
    Comparison, CountRun, MomentReport, BOOTSTRAP_RESAMPLES, BULINSKAYA_THRESHOLD, NEWTON_STEPS, REFINE_STEPS,
};
pub use zeros::{find_zeros_1d, find_zeros_2d_points, Grid1D, Grid2D, ZeroSet1D, ZeroSet2D, SUBSAMPLES};
