//! Divided differences over simplices and Kergin interpolation.

mod divdiff;
mod kergin;
mod oracle;
mod simplex;

pub use divdiff::{divdiff_1d_classical, divdiff_1d_oracle, divided_difference, ADAPTIVE_TOL};
pub use kergin::{kergin, kergin_matrix, newton_forms, newton_reconstruct};
pub use oracle::{BuiltinFn, ClosureFn, FnOracle, LimitedSmoothness, Profile};
pub use simplex::{dirichlet_moment, integrate_adaptive, AdaptiveResult, SimplexRule};
