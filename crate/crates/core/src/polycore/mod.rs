//! Multi-indices, dense polynomials over the graded-lex monomial basis and
//! symmetric multilinear forms.

mod multiindex;
mod poly;
mod symform;
mod taylor;

pub use multiindex::{basis_dim, binomial, homogeneous, monomials, rank, rank_homogeneous, MultiIndex};
pub use poly::Poly;
pub use symform::{AffineVec, SymForm};
pub use taylor::{poly_jet, taylor_poly, Jet};

pub(crate) use multiindex::factorial;
