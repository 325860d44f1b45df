//! The quartic confining potential `V(x) = x⁴/4 + (c/2)·x²`.
//!
//! Only the quartic family is a first-class type — the analytic layer's closed
//! forms (equilibrium densities, endpoint equations, spectral polynomial) are
//! all specific to it, so a general polynomial-potential interface would be
//! dead weight. `confinement_check` provides the documented grid-based sanity
//! test that the drift is strong enough to confine the dynamics.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors from the confinement comparison test.
#[derive(Debug, Error, PartialEq)]
pub enum PotentialError {
    /// The comparison bound `a·x² + b` must open downward (`a < 0`).
    #[error("confinement comparison requires a < 0, got a = {0}")]
    SlopeNotNegative(f64),
    /// The comparison bound must have a positive offset (`b > 0`).
    #[error("confinement comparison requires b > 0, got b = {0}")]
    OffsetNotPositive(f64),
    /// The comparison grid must contain at least one point.
    #[error("confinement comparison requires a nonempty grid")]
    EmptyGrid,
}

/// The quartic confining potential, parameterized by the quadratic coupling `c`.
///
/// `c ≥ −2` is the single-well ("one-cut") regime; `c < −2` is the double-well
/// ("two-cut") regime. The regime split is owned by
/// [`crate::equilibrium::equilibrium_measure`]; this type just evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarticPotential {
    c: f64,
}

impl QuarticPotential {
    /// Coupling below which the equilibrium support splits into two intervals.
    pub const ONE_CUT_THRESHOLD: f64 = -2.0;

    /// Creates the potential `x⁴/4 + (c/2)·x²`. Panics on non-finite `c`.
    pub fn new(c: f64) -> Self {
        assert!(c.is_finite(), "quartic coupling must be finite, got {c}");
        Self { c }
    }

    /// The quadratic coupling `c`.
    pub fn coupling(&self) -> f64 {
        self.c
    }

    /// `V(x) = x⁴/4 + (c/2)·x²`.
    pub fn eval(&self, x: f64) -> f64 {
        let x2 = x * x;
        0.25 * x2 * x2 + 0.5 * self.c * x2
    }

    /// `V′(x) = x³ + c·x`.
    pub fn grad(&self, x: f64) -> f64 {
        x * (x * x + self.c)
    }

    /// `V″(x) = 3x² + c`.
    pub fn second_deriv(&self, x: f64) -> f64 {
        3.0 * x * x + self.c
    }

    /// `V′` extended to the complex plane (used by the spectral-polynomial
    /// identity, which evaluates `½V′(z) − G(z)` off the real axis).
    pub fn grad_complex(&self, z: Complex64) -> Complex64 {
        z * (z * z + self.c)
    }

    /// Grid-based confinement test: verifies `−x·V′(x) ≤ a·x² + b` at every
    /// grid point, the inward-drift bound that keeps the particle system inside
    /// a compact box. Requires `a < 0`, `b > 0` and a nonempty grid.
    ///
    /// The check is deliberately grid-based, not symbolic: it documents a
    /// hypothesis, it does not prove it.
    pub fn confinement_check(&self, a: f64, b: f64, xs: &[f64]) -> Result<bool, PotentialError> {
        if !(a < 0.0) {
            return Err(PotentialError::SlopeNotNegative(a));
        }
        if !(b > 0.0) {
            return Err(PotentialError::OffsetNotPositive(b));
        }
        if xs.is_empty() {
            return Err(PotentialError::EmptyGrid);
        }
        Ok(xs.iter().all(|&x| -x * self.grad(x) <= a * x * x + b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::linspace;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn eval_matches_hand_arithmetic() {
        assert_eq!(QuarticPotential::new(0.0).eval(2.0), 4.0);
        assert_eq!(QuarticPotential::new(-2.0).eval(2.0), 0.0);
        assert_eq!(QuarticPotential::new(-1.0).eval(1.0), -0.25);
    }

    #[test]
    fn grad_matches_hand_arithmetic() {
        assert_eq!(QuarticPotential::new(0.0).grad(2.0), 8.0);
        assert_eq!(QuarticPotential::new(-2.0).grad(1.0), -1.0);
        assert_eq!(QuarticPotential::new(3.0).grad(-1.0), -4.0);
    }

    #[test]
    fn grad_is_the_central_difference_limit_of_eval() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x9e3779b9);
        for &c in &[-3.0, -2.0, 0.0, 1.5] {
            let p = QuarticPotential::new(c);
            for _ in 0..100 {
                let x: f64 = rng.gen_range(-3.0..3.0);
                for h in [1e-3, 1e-4] {
                    let fd = (p.eval(x + h) - p.eval(x - h)) / (2.0 * h);
                    // |fd − V′| = |x| h² exactly for a quartic; C = 4 covers
                    // the domain plus rounding noise.
                    assert!(
                        (fd - p.grad(x)).abs() <= 4.0 * h * h + 1e-9,
                        "central difference drifted at c={c}, x={x}, h={h}"
                    );
                }
            }
        }
    }

    #[test]
    fn eval_is_even() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &c in &[-2.5, -1.0, 0.0, 2.0] {
            let p = QuarticPotential::new(c);
            for _ in 0..200 {
                let x: f64 = rng.gen_range(-10.0..10.0);
                assert_eq!(p.eval(x), p.eval(-x));
            }
        }
    }

    #[test]
    fn second_deriv_matches_central_difference_of_grad() {
        let p = QuarticPotential::new(-1.5);
        for &x in &[-2.0, -0.3, 0.0, 1.7] {
            let h = 1e-5;
            let fd = (p.grad(x + h) - p.grad(x - h)) / (2.0 * h);
            assert_abs_diff_eq!(fd, p.second_deriv(x), epsilon = 1e-8);
        }
    }

    #[test]
    fn confinement_holds_on_the_documented_bounds() {
        let grid = linspace(-10.0, 10.0, 1001);
        assert_eq!(
            QuarticPotential::new(0.0).confinement_check(-1.0, 1.0, &grid),
            Ok(true)
        );
        assert_eq!(
            QuarticPotential::new(-2.0).confinement_check(-1.0, 3.0, &grid),
            Ok(true)
        );
    }

    #[test]
    fn confinement_rejects_bad_comparison_parameters() {
        let grid = linspace(-10.0, 10.0, 1001);
        let p = QuarticPotential::new(0.0);
        assert_eq!(
            p.confinement_check(-1.0, -1.0, &grid),
            Err(PotentialError::OffsetNotPositive(-1.0))
        );
        assert_eq!(
            p.confinement_check(0.5, 1.0, &grid),
            Err(PotentialError::SlopeNotNegative(0.5))
        );
        assert_eq!(p.confinement_check(-1.0, 1.0, &[]), Err(PotentialError::EmptyGrid));
    }

    #[test]
    fn confinement_detects_a_genuinely_too_weak_bound() {
        // For c = 5 near x = 0.5 the drift −x·V′ = −x⁴·1 − 5x² beats −9x² + 0.01? No:
        // −x⁴ − 5x² ≤ −9x² + b fails where 4x² − x⁴ > b, e.g. x = 1, b = 1.
        let grid = linspace(-2.0, 2.0, 401);
        assert_eq!(
            QuarticPotential::new(5.0).confinement_check(-9.0, 1.0, &grid),
            Ok(false)
        );
    }
}
