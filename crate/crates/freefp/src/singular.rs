//! Census of stationary one-interval measures.
//!
//! A probability density `ρ(x) = (1/2π)√((x−a)(b−x))·q(x)` on `[a, b]` is
//! stationary for the quartic potential exactly when the endpoint pair
//! `(a, b)` satisfies two algebraic conditions — the solvability
//! (orthogonality) equation `(a+b)(5b² − 2ab + 5a² + 8c) = 0` and the unit-mass
//! normalization — and the induced quadratic factor `q` stays nonnegative. The
//! census walks the three solution families: the symmetric interval
//! (`a = −b`), and two asymmetric branches `a = b/5 ± (2/5)√(−10c − 6b²)`
//! whose right edges are governed by a quartic *obstruction polynomial*
//! `f(b², c)`; mirrored intervals arise from the same roots via `b = −√x`.
//! The module also exposes the general Muskhelishvili inversion of the
//! finite-interval singular integral equation, used to cross-check the closed
//! forms against a spectral solver.

use crate::equilibrium::{MeasureDescriptor, MeasureError};
use crate::quad::{bisect_root, golden_min, linspace};
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

/// Default admissibility tolerance on both endpoint residuals.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Errors from the singular-equation layer.
#[derive(Debug, Error, PartialEq)]
pub enum SingularError {
    /// The right-hand side fails the orthogonality (solvability) condition, so
    /// no bounded solution exists; carries the measured residual.
    #[error("solvability (orthogonality) condition violated: residual {residual:.6e}")]
    Solvability { residual: f64 },
    /// Density evaluation outside the candidate interval.
    #[error("x = {x} lies outside the interval [{a}, {b}]")]
    OutsideInterval { x: f64, a: f64, b: f64 },
}

/// Which of the three endpoint-equation families produced a candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    /// `a = −b`, the symmetric family.
    Symmetric,
    /// `a = b/5 + (2/5)√(−10c − 6b²)`.
    PlusBranch,
    /// `a = b/5 − (2/5)√(−10c − 6b²)`.
    MinusBranch,
}

/// A stationary-measure candidate on a single interval `[a, b]`.
#[derive(Debug, Clone, Serialize)]
pub struct IntervalCandidate {
    /// Left support edge.
    pub a: f64,
    /// Right support edge.
    pub b: f64,
    /// Producing family.
    pub case_tag: CaseTag,
    /// Whether both residuals pass tolerance and the density is nonnegative.
    pub admissible: bool,
    /// Ascending coefficients of the cubic density factor `q`.
    pub density_params: [f64; 4],
}

impl IntervalCandidate {
    /// Candidate density `(1/2π)√((x−a)(b−x))·q(x)`; errors off `[a, b]`.
    pub fn density(&self, x: f64) -> Result<f64, SingularError> {
        if !(self.a <= x && x <= self.b) {
            return Err(SingularError::OutsideInterval {
                x,
                a: self.a,
                b: self.b,
            });
        }
        let k = &self.density_params;
        let q = k[0] + x * (k[1] + x * (k[2] + x * k[3]));
        Ok(((x - self.a) * (self.b - x)).max(0.0).sqrt() * q / (2.0 * PI))
    }

    /// Promotes the candidate to a full [`MeasureDescriptor`] (CDF, quantiles,
    /// sampling). Fails if the candidate is not a near-unit-mass density.
    pub fn to_measure(&self) -> Result<MeasureDescriptor, MeasureError> {
        MeasureDescriptor::interval(self.a, self.b, self.density_params)
    }
}

/// Solvability (orthogonality) residual `(a+b)(5b² − 2ab + 5a² + 8c)`; zero iff
/// the odd-moment condition `∫ t(t² + c)/√((t−a)(b−t)) dt = 0` holds.
pub fn solvability_residual(a: f64, b: f64, c: f64) -> f64 {
    assert!(a < b, "interval endpoints must satisfy a < b");
    (a + b) * (5.0 * b * b - 2.0 * a * b + 5.0 * a * a + 8.0 * c)
}

/// Unit-mass residual `((b−a)²/256)(15a² + 18ab + 15b² + 16c) − 1`.
pub fn normalization_residual(a: f64, b: f64, c: f64) -> f64 {
    assert!(a < b, "interval endpoints must satisfy a < b");
    let w = b - a;
    w * w / 256.0 * (15.0 * a * a + 18.0 * a * b + 15.0 * b * b + 16.0 * c) - 1.0
}

/// Ascending coefficients of the quadratic density factor
/// `q(x) = x² + ((a+b)/2)x + (3/8)b² + (1/4)ab + (3/8)a² + c`
/// (stored as a cubic with zero leading coefficient).
pub fn density_factor(a: f64, b: f64, c: f64) -> [f64; 4] {
    [
        0.375 * (a * a + b * b) + 0.25 * a * b + c,
        0.5 * (a + b),
        1.0,
        0.0,
    ]
}

/// The bounded solution of the stationarity equation on `[a, b]`:
/// `ρ(x) = (1/2π)√((x−a)(b−x))·q(x)` with `q` from [`density_factor`].
/// Errors for `x` outside `[a, b]`.
pub fn interval_density(a: f64, b: f64, c: f64, x: f64) -> Result<f64, SingularError> {
    if !(a <= x && x <= b) {
        return Err(SingularError::OutsideInterval { x, a, b });
    }
    let k = density_factor(a, b, c);
    let q = k[0] + x * (k[1] + x * k[2]);
    Ok(((x - a) * (b - x)).max(0.0).sqrt() * q / (2.0 * PI))
}

/// A function sampled on the Chebyshev–Gauss grid of an interval — the output
/// format of [`muskhelishvili_solve`].
#[derive(Debug, Clone)]
pub struct GridDensity {
    /// Left interval edge.
    pub a: f64,
    /// Right interval edge.
    pub b: f64,
    /// Chebyshev–Gauss nodes, ascending.
    pub nodes: Vec<f64>,
    /// Solution values at the nodes.
    pub values: Vec<f64>,
}

impl GridDensity {
    /// `∫_a^b φ(x) dx` by the Chebyshev–Gauss rule natural to the grid.
    pub fn mass(&self) -> f64 {
        let n = self.nodes.len();
        let mid = 0.5 * (self.a + self.b);
        let rad = 0.5 * (self.b - self.a);
        let quad: f64 = self
            .nodes
            .iter()
            .zip(&self.values)
            .map(|(&x, &v)| {
                let s = ((x - mid) / rad).clamp(-1.0, 1.0);
                v * (1.0 - s * s).max(0.0).sqrt()
            })
            .sum();
        PI / n as f64 * rad * quad
    }
}

/// Solves `∫_a^b φ(y)/(y − x) dy = f(x)` for the unique bounded solution φ via
/// the Chebyshev expansion of `f`: with `x = mid + rad·cosθ`,
/// `φ = −(1/π) Σ_{k≥1} c_k sin(kθ)` where `c_k` are the Chebyshev coefficients
/// of `f`. Returns φ on the `n`-point Chebyshev–Gauss grid (`n ≥ 16`).
///
/// The `k = 0` coefficient measures the orthogonality condition
/// `∫ f(t)/√((t−a)(b−t)) dt = 0`; if it exceeds 1e−8 the equation has no
/// bounded solution and a [`SingularError::Solvability`] is returned.
pub fn muskhelishvili_solve(
    a: f64,
    b: f64,
    f: impl Fn(f64) -> f64,
    n: usize,
) -> Result<GridDensity, SingularError> {
    assert!(a < b, "interval endpoints must satisfy a < b");
    assert!(n >= 16, "muskhelishvili_solve needs n >= 16 nodes, got {n}");
    let mid = 0.5 * (a + b);
    let rad = 0.5 * (b - a);
    let thetas: Vec<f64> = (0..n)
        .map(|j| (2 * j + 1) as f64 * PI / (2.0 * n as f64))
        .collect();
    let g: Vec<f64> = thetas.iter().map(|&th| f(mid + rad * th.cos())).collect();
    let coeff = |k: usize| -> f64 {
        2.0 / n as f64
            * thetas
                .iter()
                .zip(&g)
                .map(|(&th, &gj)| gj * (k as f64 * th).cos())
                .sum::<f64>()
    };
    let orthogonality = 0.5 * PI * coeff(0);
    if orthogonality.abs() > 1e-8 {
        return Err(SingularError::Solvability {
            residual: orthogonality,
        });
    }
    let cs: Vec<f64> = (1..n).map(coeff).collect();
    // Nodes descend as θ grows; build ascending output.
    let mut nodes: Vec<f64> = thetas.iter().map(|&th| mid + rad * th.cos()).collect();
    let mut values: Vec<f64> = thetas
        .iter()
        .map(|&th| {
            -cs.iter()
                .enumerate()
                .map(|(i, &ck)| ck * ((i + 1) as f64 * th).sin())
                .sum::<f64>()
                / PI
        })
        .collect();
    nodes.reverse();
    values.reverse();
    Ok(GridDensity { a, b, nodes, values })
}

/// The obstruction quartic
/// `f(x, c) = 45x⁴ + 156c·x³ + (182c² − 552)x² + (76c³ − 880c)x + 5c⁴ − 200c² + 2000`
/// whose roots in `[0, −5c/3]` govern the asymmetric endpoint branches.
#[derive(Debug, Clone)]
pub struct ObstructionPolynomial {
    c: f64,
    coeffs: [f64; 5],
}

impl ObstructionPolynomial {
    /// Builds `f(·, c)`.
    pub fn new(c: f64) -> Self {
        assert!(c.is_finite(), "coupling must be finite");
        let c2 = c * c;
        Self {
            c,
            coeffs: [
                5.0 * c2 * c2 - 200.0 * c2 + 2000.0,
                76.0 * c2 * c - 880.0 * c,
                182.0 * c2 - 552.0,
                156.0 * c,
                45.0,
            ],
        }
    }

    /// The coupling this slice was built at.
    pub fn coupling(&self) -> f64 {
        self.c
    }

    /// Ascending coefficients in `x`.
    pub fn coeffs(&self) -> &[f64; 5] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &k| acc * x + k)
    }

    /// Derivative in `x`.
    pub fn eval_deriv(&self, x: f64) -> f64 {
        let k = &self.coeffs;
        k[1] + x * (2.0 * k[2] + x * (3.0 * k[3] + x * 4.0 * k[4]))
    }

    /// All roots in `[lo, hi]`: bracketed bisection on a 10⁴-point sign scan,
    /// refined to ~1e−13, plus tangential roots (detected at near-zero critical
    /// points) and near-zero endpoints, cluster-merged and sorted. Downstream
    /// residual filters reject any false positives the tangential threshold
    /// lets through.
    ///
    /// Coefficient rounding can dip the polynomial slightly negative at an
    /// analytic double root, splitting it into two spurious sign changes a few
    /// 1e−8 apart around the true location; detections are therefore merged in
    /// clusters far narrower than the family's distinct-root separation, each
    /// represented by the member with the smallest `|f′|` (the critical point,
    /// which recovers the double root to machine precision).
    pub fn roots_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        assert!(lo <= hi);
        if lo == hi {
            return if self.eval(lo).abs() <= self.near_zero() {
                vec![lo]
            } else {
                vec![]
            };
        }
        let xs = linspace(lo, hi, 10_001);
        let mut roots = Vec::new();
        for w in xs.windows(2) {
            let (f0, f1) = (self.eval(w[0]), self.eval(w[1]));
            if f0 == 0.0 {
                roots.push(w[0]);
            } else if f0 * f1 < 0.0 {
                roots.push(bisect_root(|x| self.eval(x), w[0], w[1], 0.0));
            }
        }
        if self.eval(hi) == 0.0 {
            roots.push(hi);
        }
        // Tangential (double) roots: critical points where f dips to ~0
        // without a sign change.
        for w in xs.windows(2) {
            let (d0, d1) = (self.eval_deriv(w[0]), self.eval_deriv(w[1]));
            if d0 * d1 < 0.0 {
                let t = bisect_root(|x| self.eval_deriv(x), w[0], w[1], 0.0);
                if self.eval(t).abs() <= self.near_zero() {
                    roots.push(t);
                }
            }
        }
        for e in [lo, hi] {
            if self.eval(e).abs() <= self.near_zero() {
                roots.push(e);
            }
        }
        roots.sort_by(|p, q| p.partial_cmp(q).expect("roots are finite"));
        let cluster_width = 1e-6 * (hi - lo).max(1.0);
        let mut merged = Vec::new();
        let mut i = 0;
        while i < roots.len() {
            let mut j = i + 1;
            while j < roots.len() && roots[j] - roots[j - 1] <= cluster_width {
                j += 1;
            }
            let rep = roots[i..j]
                .iter()
                .copied()
                .min_by(|p, q| {
                    self.eval_deriv(*p)
                        .abs()
                        .partial_cmp(&self.eval_deriv(*q).abs())
                        .expect("derivative values are finite")
                })
                .expect("clusters are nonempty");
            merged.push(rep);
            i = j;
        }
        merged
    }

    fn near_zero(&self) -> f64 {
        // Loose on purpose: a tangential near-miss (the polynomial dips to
        // ~1e-4 of its coefficient scale without crossing) is still reported
        // as a root, so couplings given to ~7 significant digits keep the
        // root pair they have in exact arithmetic. Downstream residual
        // checks reject detections that do not yield stationary intervals.
        1e-6 * self.coeffs.iter().fold(1.0f64, |m, k| m.max(k.abs()))
    }
}

/// Minimum of the obstruction polynomial over the compact wedge
/// `K = {(x, c) : c_lo ≤ c ≤ c_hi, 0 ≤ x ≤ −5c/3}` (requires
/// `−2 ≤ c_lo ≤ c_hi ≤ 0`): a `grid` × `grid` scan in the normalized
/// coordinates `(x/(−5c/3), c)` followed by coordinate-descent golden-section
/// refinement. Returns `(minimum, (x*, c*))`.
pub fn obstruction_min_on_k(c_lo: f64, c_hi: f64, grid: usize) -> (f64, (f64, f64)) {
    assert!(
        (-2.0..=0.0).contains(&c_lo) && (-2.0..=0.0).contains(&c_hi) && c_lo <= c_hi,
        "the wedge K is defined for -2 <= c_lo <= c_hi <= 0"
    );
    assert!(grid >= 2, "the scan grid needs at least 2 points per axis");
    let eval = |s: f64, c: f64| ObstructionPolynomial::new(c).eval(s * (-5.0 * c / 3.0));
    let cs = linspace(c_lo, c_hi, grid);
    let ss = linspace(0.0, 1.0, grid);
    let (mut best, mut best_s, mut best_c) = (f64::INFINITY, 0.0, c_lo);
    for &c in &cs {
        let f = ObstructionPolynomial::new(c);
        let xmax = -5.0 * c / 3.0;
        for &s in &ss {
            let v = f.eval(s * xmax);
            if v < best {
                (best, best_s, best_c) = (v, s, c);
            }
        }
    }
    let ds = 1.0 / (grid - 1) as f64;
    let dc = (c_hi - c_lo) / (grid - 1) as f64;
    for _ in 0..8 {
        let (s_lo, s_hi) = ((best_s - ds).max(0.0), (best_s + ds).min(1.0));
        let (s, v) = golden_min(|s| eval(s, best_c), s_lo, s_hi, 60);
        if v < best {
            (best, best_s) = (v, s);
        }
        if dc > 0.0 {
            let (lo, hi) = ((best_c - dc).max(c_lo), (best_c + dc).min(c_hi));
            let (c, v) = golden_min(|c| eval(best_s, c), lo, hi, 60);
            if v < best {
                (best, best_c) = (v, c);
            }
        }
    }
    (best, (best_s * (-5.0 * best_c / 3.0), best_c))
}

/// Density-nonnegativity check resolution and slack.
const ADMISSIBILITY_POINTS: usize = 4096;

fn candidate(a: f64, b: f64, c: f64, tag: CaseTag, tol: f64) -> Option<IntervalCandidate> {
    if !(a < b - 1e-12 * b.abs().max(1.0)) {
        return None;
    }
    let rs = solvability_residual(a, b, c);
    let rn = normalization_residual(a, b, c);
    if rs.abs() > tol || rn.abs() > tol {
        return None;
    }
    let params = density_factor(a, b, c);
    // Nonnegativity at Chebyshev points (strictly interior, so the √ factor
    // stays positive and only the quadratic factor decides the sign). The
    // slack scales with `tol`: an endpoint pair accepted at residual `tol`
    // has its density determined to the same order, so a genuinely
    // borderline density (one that vanishes at an interior point or an edge
    // in exact arithmetic) may dip that far below zero in floating point.
    let slack = -(1e-12f64).max(0.1 * tol);
    let mid = 0.5 * (a + b);
    let rad = 0.5 * (b - a);
    let nonneg = (0..ADMISSIBILITY_POINTS).all(|j| {
        let theta = (2 * j + 1) as f64 * PI / (2.0 * ADMISSIBILITY_POINTS as f64);
        let x = mid + rad * theta.cos();
        let q = params[0] + x * (params[1] + x * params[2]);
        ((x - a) * (b - x)).max(0.0).sqrt() * q / (2.0 * PI) >= slack
    });
    if !nonneg {
        return None;
    }
    Some(IntervalCandidate {
        a,
        b,
        case_tag: tag,
        admissible: true,
        density_params: params,
    })
}

/// Enumerates every admissible stationary one-interval measure at coupling
/// `c`: the symmetric family plus the two asymmetric branches over each
/// obstruction-quartic root `x = b²` (both edge signs `b = ±√x`, which covers
/// the mirrored intervals). Candidates must pass both residuals at `tol` and
/// density nonnegativity. Results are sorted by `(case_tag, a)`.
pub fn enumerate_stationary_onecut(c: f64, tol: f64) -> Vec<IntervalCandidate> {
    assert!(c.is_finite(), "coupling must be finite");
    assert!(tol > 0.0, "tolerance must be positive");
    let mut found = Vec::new();
    // Symmetric family: 3b⁴ + 4cb² = 16, positive root in b².
    let b_sym = (2.0 * ((c * c + 12.0).sqrt() - c) / 3.0).sqrt();
    if let Some(cand) = candidate(-b_sym, b_sym, c, CaseTag::Symmetric, tol) {
        found.push(cand);
    }
    // Asymmetric branches exist only for c < 0 (the branch discriminant
    // −10c − 6b² needs c negative to be positive anywhere).
    if c < 0.0 {
        let obs = ObstructionPolynomial::new(c);
        for x in obs.roots_in(0.0, -5.0 * c / 3.0) {
            if x <= 1e-12 {
                continue;
            }
            let disc = -10.0 * c - 6.0 * x;
            if disc < -1e-9 * (10.0 * c.abs()).max(1.0) {
                continue;
            }
            let step = 0.4 * disc.max(0.0).sqrt();
            for b in [x.sqrt(), -x.sqrt()] {
                for (tag, sign) in [(CaseTag::PlusBranch, 1.0), (CaseTag::MinusBranch, -1.0)] {
                    if let Some(cand) = candidate(0.2 * b + sign * step, b, c, tag, tol) {
                        found.push(cand);
                    }
                }
            }
        }
    }
    // Coinciding branches (zero discriminant) produce duplicates; keep one.
    let mut out: Vec<IntervalCandidate> = Vec::new();
    for cand in found {
        if !out
            .iter()
            .any(|k| (k.a - cand.a).abs() <= 1e-9 && (k.b - cand.b).abs() <= 1e-9)
        {
            out.push(cand);
        }
    }
    out.sort_by(|p, q| {
        (p.case_tag, p.a)
            .partial_cmp(&(q.case_tag, q.a))
            .expect("candidate edges are finite")
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criticality::euler_lagrange_residual;
    use crate::equilibrium::equilibrium_measure;
    use crate::potential::QuarticPotential;
    use crate::quad::adaptive_simpson;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn solvability_residual_reference_values() {
        assert_eq!(solvability_residual(-1.3, 1.3, 0.7), 0.0);
        assert_eq!(solvability_residual(0.0, 1.0, 0.0), 5.0);
    }

    #[test]
    fn solvability_residual_matches_the_moment_integral() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a: f64 = rng.gen_range(-3.0..1.0);
            let b: f64 = rng.gen_range(a + 0.2..a + 4.0);
            let c: f64 = rng.gen_range(-4.0..4.0);
            let mid = 0.5 * (a + b);
            let rad = 0.5 * (b - a);
            // ∫ (t³ + ct)/√((t−a)(b−t)) dt via the θ substitution.
            let integral = adaptive_simpson(
                |th: f64| {
                    let t = mid + rad * th.cos();
                    t * t * t + c * t
                },
                0.0,
                PI,
                1e-12,
            );
            assert_abs_diff_eq!(
                solvability_residual(a, b, c),
                16.0 / PI * integral,
                epsilon = 1e-8
            );
        }
    }

    #[test]
    fn normalization_residual_reference_values() {
        let b = (4.0 * 3f64.sqrt() / 3.0).sqrt();
        assert_abs_diff_eq!(normalization_residual(-b, b, 0.0), 0.0, epsilon = 1e-12);
        assert_eq!(normalization_residual(-2.0, 2.0, -2.0), 0.0);
        assert!(normalization_residual(0.0, 0.1, 0.0) < 0.0);
    }

    #[test]
    fn interval_density_matches_equilibrium_in_the_symmetric_case() {
        // c = −2: the factor vanishes at the origin.
        assert_eq!(interval_density(-2.0, 2.0, -2.0, 0.0), Ok(0.0));
        // c = 0: the closed form reproduces the equilibrium density.
        let m = equilibrium_measure(0.0);
        let a0 = m.support()[0].1;
        for x in linspace(-a0, a0, 100) {
            let d = interval_density(-a0, a0, 0.0, x).unwrap();
            assert_abs_diff_eq!(d, m.density(x), epsilon = 1e-12);
        }
        assert_eq!(interval_density(-1.0, 1.0, 0.0, 1.0), Ok(0.0));
        assert!(matches!(
            interval_density(-1.0, 1.0, 0.0, 1.5),
            Err(SingularError::OutsideInterval { .. })
        ));
    }

    #[test]
    fn muskhelishvili_reproduces_the_closed_form() {
        let m = equilibrium_measure(0.0);
        let a0 = m.support()[0].1;
        let p = QuarticPotential::new(0.0);
        let sol = muskhelishvili_solve(-a0, a0, |t| -0.5 * p.grad(t), 64).unwrap();
        for (&x, &v) in sol.nodes.iter().zip(&sol.values) {
            let expected = interval_density(-a0, a0, 0.0, x).unwrap();
            assert_abs_diff_eq!(v, expected, epsilon = 1e-10);
        }
        // Mass agrees with direct quadrature of the closed form (= 1).
        assert_abs_diff_eq!(sol.mass(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn muskhelishvili_zero_input_gives_zero_solution() {
        let sol = muskhelishvili_solve(-1.0, 1.0, |_| 0.0, 32).unwrap();
        assert!(sol.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn muskhelishvili_linear_input_matches_pv_oracle() {
        // f = t on [−1,1] has the bounded solution φ = −√(1−x²)/π.
        let sol = muskhelishvili_solve(-1.0, 1.0, |t| t, 32).unwrap();
        for (&x, &v) in sol.nodes.iter().zip(&sol.values) {
            assert_abs_diff_eq!(v, -(1.0 - x * x).max(0.0).sqrt() / PI, epsilon = 1e-12);
        }
        // Brute-force PV cross-check that φ solves ∫ φ(y)/(y−x) dy = x:
        // the Hilbert transform has the opposite kernel orientation.
        let h = crate::criticality::pv_hilbert(
            |y: f64| -(1.0 - y * y).max(0.0).sqrt() / PI,
            -1.0,
            1.0,
            0.3,
        )
        .unwrap();
        assert_abs_diff_eq!(-h, 0.3, epsilon = 1e-8);
    }

    #[test]
    fn muskhelishvili_rejects_unsolvable_input() {
        // Constant 1: ∫ dt/√((t−a)(b−t)) = π ≠ 0.
        match muskhelishvili_solve(-1.0, 1.0, |_| 1.0, 32) {
            Err(SingularError::Solvability { residual }) => {
                assert_abs_diff_eq!(residual, PI, epsilon = 1e-6);
            }
            other => panic!("expected a solvability error, got {other:?}"),
        }
    }

    #[test]
    #[should_panic(expected = "n >= 16")]
    fn muskhelishvili_requires_enough_nodes() {
        let _ = muskhelishvili_solve(-1.0, 1.0, |t| t, 8);
    }

    #[test]
    fn census_finds_exactly_the_equilibrium_measure_in_the_onecut_regime() {
        for c in [-2.0, -1.5, -1.0, -0.5, 0.0, 1.0, 5.0] {
            let cands = enumerate_stationary_onecut(c, DEFAULT_TOL);
            assert_eq!(cands.len(), 1, "expected a unique candidate at c = {c}");
            let cand = &cands[0];
            assert_eq!(cand.case_tag, CaseTag::Symmetric);
            assert!(cand.admissible);
            let m = equilibrium_measure(c);
            for x in linspace(cand.a, cand.b, 512) {
                let d = cand.density(x).unwrap();
                assert!(
                    (d - m.density(x)).abs() <= 1e-10,
                    "candidate density deviates at c={c}, x={x}"
                );
            }
        }
        let b = enumerate_stationary_onecut(0.0, DEFAULT_TOL)[0].b;
        assert_abs_diff_eq!(b, 1.519_671_4, epsilon = 1e-6);
    }

    #[test]
    fn census_is_empty_between_the_thresholds() {
        for c in [-2.5, -3.0, -3.5] {
            assert!(
                enumerate_stationary_onecut(c, DEFAULT_TOL).is_empty(),
                "no connected stationary measure should exist at c = {c}"
            );
        }
    }

    #[test]
    fn census_finds_the_unilateral_pair_at_the_critical_coupling() {
        let c = -(15f64.sqrt());
        let cands = enumerate_stationary_onecut(c, DEFAULT_TOL);
        assert_eq!(cands.len(), 2, "expected the unilateral pair, got {cands:#?}");
        let t = 15f64.powf(-0.25);
        let right = &cands[0];
        let left = &cands[1];
        assert_abs_diff_eq!(right.a, t, epsilon = 1e-9);
        assert_abs_diff_eq!(right.b, 5.0 * t, epsilon = 1e-9);
        assert_abs_diff_eq!(left.a, -5.0 * t, epsilon = 1e-9);
        assert_abs_diff_eq!(left.b, -t, epsilon = 1e-9);
        // Density factor (x + 4t)(x − t), checked pointwise.
        for x in linspace(right.a, right.b, 100) {
            let expected =
                ((x - right.a) * (right.b - x)).max(0.0).sqrt() * (x + 4.0 * t) * (x - t)
                    / (2.0 * PI);
            assert_abs_diff_eq!(right.density(x).unwrap(), expected, epsilon = 1e-12);
        }
        // The pair is a mirror image: (a, b) ↦ (−b, −a).
        assert_abs_diff_eq!(left.a, -right.b, epsilon = 1e-9);
        assert_abs_diff_eq!(left.b, -right.a, epsilon = 1e-9);
    }

    #[test]
    fn admissible_candidates_pass_the_stationarity_test() {
        for c in [0.0, -1.0, -(15f64.sqrt())] {
            let p = QuarticPotential::new(c);
            for cand in enumerate_stationary_onecut(c, DEFAULT_TOL) {
                let m = cand.to_measure().expect("admissible candidates are measures");
                let r = euler_lagrange_residual(&m, &p, 512);
                assert!(
                    r <= 1e-3,
                    "candidate [{}, {}] at c={c} has residual {r}",
                    cand.a,
                    cand.b
                );
            }
        }
    }

    #[test]
    fn obstruction_is_positive_on_the_wedge_and_minimized_at_the_corner() {
        // Grid positivity on K for −2 ≤ c ≤ 0.
        for c in linspace(-2.0, 0.0, 200) {
            let f = ObstructionPolynomial::new(c);
            for x in linspace(0.0, -5.0 * c / 3.0, 200) {
                assert!(f.eval(x) > 0.0, "obstruction vanished at (x={x}, c={c})");
            }
        }
        let (min, (x_star, c_star)) = obstruction_min_on_k(-2.0, 0.0, 201);
        assert_abs_diff_eq!(min, 9680.0 / 9.0, epsilon = 1e-6);
        assert_abs_diff_eq!(x_star, 10.0 / 3.0, epsilon = 1e-6);
        assert_abs_diff_eq!(c_star, -2.0, epsilon = 1e-9);
    }

    #[test]
    fn obstruction_boundary_slices_have_closed_forms() {
        for c in [-2.0, -1.3, -0.4, 0.0] {
            let f = ObstructionPolynomial::new(c);
            let slice0 = 5.0 * (c * c - 20.0).powi(2);
            assert_abs_diff_eq!(f.eval(0.0), slice0, epsilon = 1e-9 * slice0.abs());
            let edge = -5.0 * c / 3.0;
            let slice1 = 80.0 / 9.0 * (c * c - 15.0).powi(2);
            assert_abs_diff_eq!(f.eval(edge), slice1, epsilon = 1e-8 * slice1.abs().max(1.0));
        }
        // At c = −√15 the outer-edge slice collapses to zero (outside K:
        // documented edge behavior of the branch family).
        let c = -(15f64.sqrt());
        let f = ObstructionPolynomial::new(c);
        assert!(f.eval(-5.0 * c / 3.0).abs() <= 1e-8);
    }

    #[test]
    #[should_panic(expected = "wedge K")]
    fn obstruction_min_rejects_couplings_outside_the_wedge() {
        let _ = obstruction_min_on_k(-3.0, 0.0, 64);
    }
}
