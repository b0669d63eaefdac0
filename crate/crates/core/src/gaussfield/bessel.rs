//! Mixed partial derivatives of (u₁, u₂) ↦ J₀(‖u‖).

use crate::polycore::{binomial, factorial, MultiIndex};

/// Below this radius the power series is used; above it the angular integral.
pub const SERIES_RADIUS: f64 = 8.0;

/// ∂^γ J₀(‖u‖) from J₀(√s) = Σ_m (−1)^m (s/4)^m / (m!)², s = u₁² + u₂²,
/// differentiated term by term as a polynomial.
///
/// The tail after term m is bounded by the first omitted term once
/// m > ‖u‖, since the terms then decrease geometrically; summation stops
/// when that bound (times the derivative factor (2m)^|γ|) drops below 1e−18.
pub fn j0_radial_series(gamma: &MultiIndex, u: &[f64]) -> f64 {
    let (g1, g2) = (gamma.exponents()[0] as usize, gamma.exponents()[1] as usize);
    let order = g1 + g2;
    let radius = u[0].hypot(u[1]);
    let mut total = 0.0;
    let mut m = order.div_ceil(2);
    loop {
        let c = if m % 2 == 0 { 1.0 } else { -1.0 } / (4f64.powi(m as i32) * factorial(m).powi(2));
        let mut term = 0.0;
        for j in 0..=m {
            let (a, b) = (2 * j, 2 * (m - j));
            if a < g1 || b < g2 {
                continue;
            }
            let fall = falling(a, g1) * falling(b, g2);
            term += binomial(m, j) as f64 * fall * u[0].powi((a - g1) as i32) * u[1].powi((b - g2) as i32);
        }
        total += c * term;
        let bound = (2.0 * m as f64 + 2.0).powi(order as i32) * (radius / 2.0).powi(2 * m as i32 + 2)
            / factorial(m + 1).powi(2);
        if m as f64 > radius && bound < 1e-18 {
            return total;
        }
        m += 1;
    }
}

fn falling(a: usize, k: usize) -> f64 {
    (0..k).map(|i| (a - i) as f64).product()
}

/// ∂^γ J₀(‖u‖) = (1/2π) ∫ ω^γ cos^{(|γ|)}(ω·u) dθ, ω = (cos θ, sin θ), by the
/// trapezoid rule, which converges geometrically for this periodic integrand.
pub fn j0_radial_angular(gamma: &MultiIndex, u: &[f64]) -> f64 {
    let radius = u[0].hypot(u[1]);
    let m = 2 * (radius.ceil() as usize + 40);
    let order = gamma.order();
    let (g1, g2) = (gamma.exponents()[0] as i32, gamma.exponents()[1] as i32);
    let mut acc = crate::stats::Sum::default();
    for j in 0..m {
        let theta = std::f64::consts::TAU * j as f64 / m as f64;
        let (s, c) = theta.sin_cos();
        let phase = c * u[0] + s * u[1];
        let d = match order % 4 {
            0 => phase.cos(),
            1 => -phase.sin(),
            2 => -phase.cos(),
            _ => phase.sin(),
        };
        acc.add(c.powi(g1) * s.powi(g2) * d);
    }
    acc.value() / m as f64
}

/// ∂^γ J₀(‖u‖), choosing the route by radius.
pub fn j0_radial(gamma: &MultiIndex, u: &[f64]) -> f64 {
    if u[0].hypot(u[1]) <= SERIES_RADIUS {
        j0_radial_series(gamma, u)
    } else {
        j0_radial_angular(gamma, u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::monomials;

    #[test]
    fn known_values() {
        let z = MultiIndex::zero(2);
        assert_eq!(j0_radial(&z, &[0.0, 0.0]), 1.0);
        // J₀(1) and J₀(2.404825557695773) ≈ 0
        assert!((j0_radial(&z, &[0.6, 0.8]) - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!(j0_radial(&z, &[2.404_825_557_695_773, 0.0]).abs() < 1e-15);
        // J₀(10) = −0.2459357644513483
        assert!((j0_radial(&z, &[0.0, 10.0]) + 0.245_935_764_451_348_3).abs() < 1e-14);
    }

    #[test]
    fn series_and_angular_routes_agree() {
        for u in [[0.3, -0.2], [1.5, 2.0], [-4.0, 3.0], [5.5, -5.5]] {
            for g in monomials(2, 6) {
                let a = j0_radial_series(&g, &u);
                let b = j0_radial_angular(&g, &u);
                assert!((a - b).abs() < 1e-12, "{g} at {u:?}: {a} vs {b}");
            }
        }
    }
}
