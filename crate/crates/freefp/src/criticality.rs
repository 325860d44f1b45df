//! Critical-measure diagnostics.
//!
//! A compactly supported measure μ is *critical* for the quartic potential
//! exactly when its Hilbert transform matches half the potential gradient on
//! the support (`Hμ = ½V′`), and equivalently when its Stieltjes transform
//! satisfies the algebraic identity `(½V′(z) − G_μ(z))² = R(z)` for a real
//! polynomial `R` of degree 6 built from the first two moments. This module
//! computes all four ingredients — Stieltjes transforms, principal-value
//! Hilbert transforms, the polynomial `R`, and Descartes sign counts for its
//! real-root analysis — plus the Euler–Lagrange residual functional that turns
//! the first identity into a quantitative stationarity test.

use crate::equilibrium::{numeric_moment, Density};
use crate::potential::QuarticPotential;
use crate::quad::{adaptive_simpson, composite_simpson, linspace};
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

/// Errors from transform evaluation and sign counting.
#[derive(Debug, Error, PartialEq)]
pub enum CriticalityError {
    /// The Stieltjes transform needs `z` off the support (and the identity
    /// residual needs it off the whole real axis).
    #[error("z = {0} is not in the domain of analyticity (on the support/real axis)")]
    OnSupport(Complex64),
    /// Principal values are defined strictly inside a support interval.
    #[error("x = {x} is not strictly inside the interval [{lo}, {hi}]")]
    OutsideInterval { x: f64, lo: f64, hi: f64 },
    /// The zero polynomial carries no sign information.
    #[error("the zero polynomial has no sign-count data")]
    ZeroPolynomial,
}

/// Dense real polynomial, coefficients in ascending degree order, with the
/// invariant that the highest-degree stored coefficient is nonzero (the zero
/// polynomial stores an empty coefficient list).
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialCoeffs {
    coeffs: Vec<f64>,
}

impl PolynomialCoeffs {
    /// Builds a polynomial from ascending coefficients, trimming exact
    /// trailing zeros so `degree` is well-defined.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Ascending-degree coefficients (empty for the zero polynomial).
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation at a real point.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &k| acc * x + k)
    }

    /// Horner evaluation at a complex point.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &k| acc * z + k)
    }
}

/// `G_μ(z) = ∫ dμ(x)/(z − x)` for an absolutely continuous measure, by
/// adaptive quadrature in the θ variable of each support interval (absolute
/// tolerance well under 1e−10). `z` must lie off the support.
pub fn stieltjes<D: Density + ?Sized>(m: &D, z: Complex64) -> Result<Complex64, CriticalityError> {
    let support = m.support();
    if z.im == 0.0 && support.iter().any(|&(lo, hi)| lo <= z.re && z.re <= hi) {
        return Err(CriticalityError::OnSupport(z));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (lo, hi) in support {
        let mid = 0.5 * (lo + hi);
        let rad = 0.5 * (hi - lo);
        acc += adaptive_simpson(
            |th: f64| {
                let (s, c) = th.sin_cos();
                let x = mid + rad * c;
                Complex64::new(m.density(x) * rad * s, 0.0) / (z - x)
            },
            0.0,
            PI,
            1e-12,
        );
    }
    Ok(acc)
}

/// Stieltjes transform of a weighted point grid `Σ w_i / (z − x_i)` (the
/// degenerate-measure counterpart of [`stieltjes`], e.g. for empirical
/// measures). `z` must avoid every node.
pub fn stieltjes_points(xs: &[f64], ws: &[f64], z: Complex64) -> Result<Complex64, CriticalityError> {
    assert_eq!(xs.len(), ws.len(), "nodes and weights must pair up");
    if z.im == 0.0 && xs.iter().any(|&x| x == z.re) {
        return Err(CriticalityError::OnSupport(z));
    }
    Ok(xs
        .iter()
        .zip(ws)
        .map(|(&x, &w)| Complex64::new(w, 0.0) / (z - x))
        .sum())
}

/// A measure bundled with its Stieltjes transform — a convenience handle for
/// repeated evaluations against the same measure.
pub struct StieltjesEvaluator<D: Density> {
    measure: D,
}

impl<D: Density> StieltjesEvaluator<D> {
    /// Wraps a measure for repeated transform evaluation.
    pub fn new(measure: D) -> Self {
        Self { measure }
    }

    /// The underlying measure.
    pub fn measure(&self) -> &D {
        &self.measure
    }

    /// `G_μ(z)`; see [`stieltjes`].
    pub fn eval(&self, z: Complex64) -> Result<Complex64, CriticalityError> {
        stieltjes(&self.measure, z)
    }
}

/// Share of the interval width excised around the singular point when the
/// subtracted integrand is integrated; the excluded sliver contributes
/// O(width · ρ′), far below every tolerance used against these transforms.
const PV_SLIVER: f64 = 1e-8;

/// Principal value `PV ∫_lo^hi ρ(y)/(x − y) dy` for a density on a single
/// interval, via singularity subtraction plus the exact logarithmic term:
/// `∫ (ρ(y) − ρ(x))/(x − y) dy + ρ(x)·log((x − lo)/(hi − x))`, each piece by
/// adaptive quadrature. `x` must lie strictly inside `(lo, hi)`.
pub fn pv_hilbert(
    rho: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    x: f64,
) -> Result<f64, CriticalityError> {
    if !(lo < x && x < hi) {
        return Err(CriticalityError::OutsideInterval { x, lo, hi });
    }
    let rho_x = rho(x);
    let g = |y: f64| (rho(y) - rho_x) / (x - y);
    let delta = PV_SLIVER * (hi - lo);
    let mut t1 = 0.0;
    if x - delta > lo {
        t1 += adaptive_simpson(&g, lo, x - delta, 1e-11);
    }
    if x + delta < hi {
        t1 += adaptive_simpson(&g, x + delta, hi, 1e-11);
    }
    Ok(t1 + rho_x * ((x - lo) / (hi - x)).ln())
}

/// `Hμ(x)` over the full (possibly two-interval) support: the principal value
/// on the interval containing `x` plus regular contributions from the others.
/// `x` must lie strictly inside one support interval.
pub fn hilbert_transform<D: Density + ?Sized>(m: &D, x: f64) -> Result<f64, CriticalityError> {
    let support = m.support();
    let own = support
        .iter()
        .copied()
        .find(|&(lo, hi)| lo < x && x < hi)
        .ok_or_else(|| {
            let (lo, hi) = (support.first().map_or(x, |s| s.0), support.last().map_or(x, |s| s.1));
            CriticalityError::OutsideInterval { x, lo, hi }
        })?;
    let mut h = pv_hilbert(|y| m.density(y), own.0, own.1, x)?;
    for &(lo, hi) in support.iter().filter(|&&iv| iv != own) {
        let mid = 0.5 * (lo + hi);
        let rad = 0.5 * (hi - lo);
        h += adaptive_simpson(
            |th: f64| {
                let (s, c) = th.sin_cos();
                let y = mid + rad * c;
                m.density(y) * rad * s / (x - y)
            },
            0.0,
            PI,
            1e-11,
        );
    }
    Ok(h)
}

/// Grid-controlled variant of the principal value used by
/// [`euler_lagrange_residual`]: composite Simpson with `panels` panels, which
/// makes the residual decrease predictably under refinement (an adaptive rule
/// would hide the grid parameter).
fn pv_hilbert_composite<D: Density + ?Sized>(
    m: &D,
    own: (f64, f64),
    support: &[(f64, f64)],
    x: f64,
    panels: usize,
) -> f64 {
    let (lo, hi) = own;
    let width = hi - lo;
    let rho_x = m.density(x);
    // Central-difference slope stands in for the difference quotient in the
    // rounding-dominated window right at y = x (composite nodes can land
    // exactly there).
    let d_slope = 1e-6 * width;
    let slope = -(m.density(x + d_slope) - m.density(x - d_slope)) / (2.0 * d_slope);
    let guard = 1e-9 * width;
    let g = |y: f64| {
        if (y - x).abs() <= guard {
            slope
        } else {
            (m.density(y) - rho_x) / (x - y)
        }
    };
    let mut h = composite_simpson(g, lo, hi, panels) + rho_x * ((x - lo) / (hi - x)).ln();
    for &(lo2, hi2) in support.iter().filter(|&&iv| iv != own) {
        let mid = 0.5 * (lo2 + hi2);
        let rad = 0.5 * (hi2 - lo2);
        h += composite_simpson(
            |th: f64| {
                let (s, c) = th.sin_cos();
                let y = mid + rad * c;
                m.density(y) * rad * s / (x - y)
            },
            0.0,
            PI,
            panels,
        );
    }
    h
}

/// Stationarity residual `max |Hμ(x) − ½V′(x)|` over `grid` interior points of
/// every support interval, excluding a 1% margin at each edge (the √ edge
/// behavior makes quadrature converge slowly exactly at the endpoints, and the
/// residual stays a valid discriminator away from them). The quadrature panel
/// count is tied to `grid`, so doubling `grid` genuinely refines the estimate.
pub fn euler_lagrange_residual<D: Density + ?Sized>(
    m: &D,
    p: &QuarticPotential,
    grid: usize,
) -> f64 {
    assert!(grid >= 8, "euler_lagrange_residual needs grid >= 8, got {grid}");
    let support = m.support();
    let mut worst = 0.0f64;
    for &(lo, hi) in &support {
        let margin = 0.01 * (hi - lo);
        for x in linspace(lo + margin, hi - margin, grid) {
            let h = pv_hilbert_composite(m, (lo, hi), &support, x, grid);
            worst = worst.max((h - 0.5 * p.grad(x)).abs());
        }
    }
    worst
}

/// The degree-6 spectral polynomial
/// `R(z) = ¼z⁶ + (c/2)z⁴ + ¼(c²−4)z² − m₁·z − (m₂ + c)` attached to a critical
/// measure with first moment `m₁` and second moment `m₂`.
pub fn r_polynomial(c: f64, m1: f64, m2: f64) -> PolynomialCoeffs {
    PolynomialCoeffs::new(vec![
        -(m2 + c),
        -m1,
        0.25 * (c * c - 4.0),
        0.0,
        0.5 * c,
        0.0,
        0.25,
    ])
}

/// `max_z |(½V′(z) − G_μ(z))² − R(z)|` over the sample points, with `R` built
/// from the measure's quadrature moments. Near zero only when the measure is
/// critical. All samples must lie off the real axis.
pub fn r_identity_residual<D: Density + ?Sized>(
    m: &D,
    c: f64,
    z_samples: &[Complex64],
) -> Result<f64, CriticalityError> {
    if let Some(&z) = z_samples.iter().find(|z| z.im == 0.0) {
        return Err(CriticalityError::OnSupport(z));
    }
    let p = QuarticPotential::new(c);
    let r = r_polynomial(c, numeric_moment(m, 1), numeric_moment(m, 2));
    let mut worst = 0.0f64;
    for &z in z_samples {
        let g = stieltjes(m, z)?;
        let lhs = (0.5 * p.grad_complex(z) - g).powi(2);
        worst = worst.max((lhs - r.eval_complex(z)).norm());
    }
    Ok(worst)
}

/// Coefficients at or below this magnitude are treated as zeros by the sign
/// count, so rounding noise cannot manufacture sign changes.
const DESCARTES_ZERO: f64 = 1e-14;

/// Descartes' rule of signs: `(p_pos, q_neg)` where `p_pos` counts sign
/// changes of the coefficient sequence (zeros skipped) and `q_neg` those of
/// the sequence with odd-degree coefficients negated. The number of positive
/// (resp. negative) real roots is at most `p_pos` (resp. `q_neg`) and has the
/// same parity.
pub fn descartes_counts(p: &PolynomialCoeffs) -> Result<(usize, usize), CriticalityError> {
    let kept: Vec<(usize, f64)> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, k)| k.abs() > DESCARTES_ZERO)
        .map(|(deg, &k)| (deg, k.signum()))
        .collect();
    if kept.is_empty() {
        return Err(CriticalityError::ZeroPolynomial);
    }
    let changes = |vals: &[f64]| vals.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
    let pos_signs: Vec<f64> = kept.iter().map(|&(_, s)| s).collect();
    // Substituting z ↦ −z negates the odd-degree coefficients.
    let neg_signs: Vec<f64> = kept
        .iter()
        .map(|&(deg, s)| if deg % 2 == 1 { -s } else { s })
        .collect();
    Ok((changes(&pos_signs), changes(&neg_signs)))
}
