use std::collections::BTreeMap;

use super::multiindex::{monomials, MultiIndex};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Partial derivatives {∂^α f(x)} keyed by α.
pub type Jet = BTreeMap<MultiIndex, f64>;

/// Σ_{|α|≤k} ∂^α f(x)/α! · (X − x)^α.
pub fn taylor_poly(jet: &Jet, x: &[f64], k: usize) -> Result<Poly> {
    let n = x.len();
    let mut out = Poly::zero(n, k);
    for alpha in monomials(n, k) {
        let d = *jet.get(&alpha).ok_or_else(|| Error::MissingJet(alpha.exponents().to_vec()))?;
        if d == 0.0 {
            continue;
        }
        let term = Poly::shifted_monomial(x, &alpha).scale(d / alpha.factorial());
        out = out.add(&term)?;
    }
    Ok(out)
}

/// The exact k-jet of a polynomial at x.
pub fn poly_jet(p: &Poly, x: &[f64], k: usize) -> Result<Jet> {
    monomials(p.n(), k)
        .into_iter()
        .map(|alpha| {
            let v = p.derivative(&alpha)?.eval(x)?;
            Ok((alpha, v))
        })
        .collect()
}
