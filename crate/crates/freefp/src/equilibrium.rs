//! Equilibrium measures of the quartic potential, in closed form.
//!
//! For `c ≥ −2` the minimizer is supported on one interval `[−a, a]` with
//! density `(1/π)(x²/2 + b₀)√(a² − x²)`; for `c < −2` it splits onto
//! `[−b, −a] ∪ [a, b]` with density `(1/2π)|x|√((x² − a²)(b² − x²))`. A third
//! family ([`MeasureKind::Interval`]) carries stationary measures supported on
//! a single interval `[a, b]` with a polynomial density factor — the census in
//! [`crate::singular`] produces those.
//!
//! Descriptors are immutable after construction: the CDF bracket tables are
//! built eagerly, so every operation is `&self` and thread-safe.

use crate::quad::{adaptive_simpson, bisect_root, linspace, sqrt_edge_integral};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// Errors from measure construction, inversion, and (de)serialization.
#[derive(Debug, Error)]
pub enum MeasureError {
    /// Quantile levels must lie strictly inside (0, 1).
    #[error("quantile level must lie strictly inside (0,1), got {0}")]
    QuantileRange(f64),
    /// The requested family parameters do not describe a probability density.
    #[error("invalid measure parameters: {0}")]
    InvalidParams(String),
    /// JSON that does not round-trip to a valid descriptor.
    #[error("malformed measure JSON: {0}")]
    Json(String),
}

/// Analytic family tag of a [`MeasureDescriptor`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    /// Symmetric single-interval equilibrium family on `[−a, a]`.
    OneCut,
    /// Symmetric two-interval equilibrium family on `[−b, −a] ∪ [a, b]`.
    TwoCut,
    /// General single interval `[a, b]` with a polynomial density factor.
    Interval,
}

#[derive(Debug, Clone, PartialEq)]
enum Family {
    OneCut { a: f64, b0: f64 },
    TwoCut { a: f64, b: f64 },
    Interval { a: f64, b: f64, factor: [f64; 4] },
}

/// Evaluate an ascending-coefficient cubic `k0 + k1 x + k2 x² + k3 x³`.
fn poly3(k: &[f64; 4], x: f64) -> f64 {
    k[0] + x * (k[1] + x * (k[2] + x * k[3]))
}

/// Minimal view of an absolutely continuous measure: support intervals plus a
/// pointwise density. The diagnostic layer (Stieltjes/Hilbert transforms, free
/// energy) is generic over this so it can also probe non-equilibrium test
/// densities.
pub trait Density {
    /// Ordered, disjoint closed support intervals.
    fn support(&self) -> Vec<(f64, f64)>;
    /// Pointwise density, 0 outside the support.
    fn density(&self, x: f64) -> f64;
}

impl<D: Density + ?Sized> Density for &D {
    fn support(&self) -> Vec<(f64, f64)> {
        (**self).support()
    }
    fn density(&self, x: f64) -> f64 {
        (**self).density(x)
    }
}

/// A closure-backed density on a single interval, for diagnostics against
/// non-equilibrium profiles (uniform blobs, perturbed densities, …).
pub struct FnDensity<F: Fn(f64) -> f64> {
    lo: f64,
    hi: f64,
    f: F,
}

impl<F: Fn(f64) -> f64> FnDensity<F> {
    /// Wraps `f` restricted to `[lo, hi]` (`lo < hi`).
    pub fn new(lo: f64, hi: f64, f: F) -> Self {
        assert!(lo < hi, "FnDensity needs lo < hi, got [{lo}, {hi}]");
        Self { lo, hi, f }
    }
}

impl<F: Fn(f64) -> f64> Density for FnDensity<F> {
    fn support(&self) -> Vec<(f64, f64)> {
        vec![(self.lo, self.hi)]
    }
    fn density(&self, x: f64) -> f64 {
        if x < self.lo || x > self.hi {
            0.0
        } else {
            (self.f)(x)
        }
    }
}

/// Number of bracket nodes (per support interval) in the eager CDF table.
const CDF_TABLE_NODES: usize = 2049;
/// Constructors reject parameter sets whose total mass strays further than
/// this from 1; within the band, CDF/quantile/sampling renormalize exactly.
const MASS_SLACK: f64 = 1e-3;

#[derive(Debug, Clone)]
struct CdfTable {
    xs: Vec<f64>,
    us: Vec<f64>,
}

/// Analytic description of an absolutely continuous probability measure:
/// family parameters, support, density, CDF, quantile, moments and sampling.
#[derive(Debug, Clone)]
pub struct MeasureDescriptor {
    family: Family,
    support: Vec<(f64, f64)>,
    mass: f64,
    tables: Vec<CdfTable>,
}

impl MeasureDescriptor {
    /// Symmetric one-interval family `ρ(x) = (1/π)(x²/2 + b₀)√(a² − x²)` on
    /// `[−a, a]`. Requires `a > 0`, `b₀ ≥ 0`, and total mass within 1e−3 of 1.
    pub fn one_cut(a: f64, b0: f64) -> Result<Self, MeasureError> {
        if !(a.is_finite() && a > 0.0) {
            return Err(MeasureError::InvalidParams(format!(
                "one-cut edge must be positive and finite, got a = {a}"
            )));
        }
        if !(b0.is_finite() && b0 >= 0.0) {
            return Err(MeasureError::InvalidParams(format!(
                "one-cut offset must be nonnegative, got b0 = {b0}"
            )));
        }
        let mass = a.powi(4) / 16.0 + 0.5 * b0 * a * a;
        Self::finish(Family::OneCut { a, b0 }, vec![(-a, a)], mass)
    }

    /// Symmetric two-interval family `ρ(x) = (1/2π)|x|√((x² − a²)(b² − x²))`
    /// on `[−b, −a] ∪ [a, b]`. Requires `0 < a < b` and near-unit mass.
    pub fn two_cut(a: f64, b: f64) -> Result<Self, MeasureError> {
        if !(a.is_finite() && b.is_finite() && 0.0 < a && a < b) {
            return Err(MeasureError::InvalidParams(format!(
                "two-cut edges must satisfy 0 < a < b, got a = {a}, b = {b}"
            )));
        }
        // In the u = x² variable the density is a semicircle on [a², b²] of
        // radius r = (b² − a²)/2 and mass r²/4.
        let r = 0.5 * (b * b - a * a);
        let mass = r * r / 4.0;
        Self::finish(Family::TwoCut { a, b }, vec![(-b, -a), (a, b)], mass)
    }

    /// Single-interval family `ρ(x) = (1/2π)√((x − a)(b − x))·q(x)` with a
    /// cubic (ascending-coefficient) factor `q`. Requires `a < b`, a factor
    /// that is nonnegative on `[a, b]`, and near-unit mass.
    pub fn interval(a: f64, b: f64, factor: [f64; 4]) -> Result<Self, MeasureError> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(MeasureError::InvalidParams(format!(
                "interval must satisfy a < b, got a = {a}, b = {b}"
            )));
        }
        if factor.iter().any(|k| !k.is_finite()) {
            return Err(MeasureError::InvalidParams(
                "interval density factor has non-finite coefficients".into(),
            ));
        }
        // Mass by Chebyshev quadrature (exact: polynomial factor).
        let mass = sqrt_edge_integral(|x| poly3(&factor, x), a, b, 32) / (2.0 * PI);
        // Nonnegativity of the factor on a fine grid; the boundary case
        // (roots on [a,b]) is legitimate, so allow a rounding-level dip.
        let neg = linspace(a, b, 4097)
            .into_iter()
            .map(|x| poly3(&factor, x))
            .fold(f64::INFINITY, f64::min);
        let scale = factor.iter().fold(1.0f64, |m, k| m.max(k.abs()));
        if neg < -1e-9 * scale {
            return Err(MeasureError::InvalidParams(format!(
                "interval density factor dips negative on [a, b] (min {neg:.3e})"
            )));
        }
        Self::finish(Family::Interval { a, b, factor }, vec![(a, b)], mass)
    }

    fn finish(family: Family, support: Vec<(f64, f64)>, mass: f64) -> Result<Self, MeasureError> {
        if !mass.is_finite() || (mass - 1.0).abs() > MASS_SLACK {
            return Err(MeasureError::InvalidParams(format!(
                "total mass {mass} is not within {MASS_SLACK} of 1"
            )));
        }
        let mut m = Self {
            family,
            support,
            mass,
            tables: Vec::new(),
        };
        m.tables = m
            .support
            .iter()
            .map(|&(lo, hi)| {
                let xs = linspace(lo, hi, CDF_TABLE_NODES);
                let mut us: Vec<f64> = xs.iter().map(|&x| m.cdf_raw(x) / m.mass).collect();
                // Monotonize away any rounding-level inversions so bracketed
                // root-finding always sees a usable table.
                for i in 1..us.len() {
                    if us[i] < us[i - 1] {
                        us[i] = us[i - 1];
                    }
                }
                CdfTable { xs, us }
            })
            .collect();
        Ok(m)
    }

    /// Analytic family tag.
    pub fn kind(&self) -> MeasureKind {
        match self.family {
            Family::OneCut { .. } => MeasureKind::OneCut,
            Family::TwoCut { .. } => MeasureKind::TwoCut,
            Family::Interval { .. } => MeasureKind::Interval,
        }
    }

    /// Ordered, disjoint support intervals (one or two).
    pub fn support(&self) -> &[(f64, f64)] {
        &self.support
    }

    /// Pointwise density; exactly 0 outside the support.
    pub fn density(&self, x: f64) -> f64 {
        match &self.family {
            Family::OneCut { a, b0 } => {
                if x.abs() >= *a {
                    return 0.0;
                }
                (0.5 * x * x + b0) * (a * a - x * x).max(0.0).sqrt() / PI
            }
            Family::TwoCut { a, b } => {
                let u = x * x;
                let (aa, bb) = (a * a, b * b);
                if u <= aa || u >= bb {
                    return 0.0;
                }
                x.abs() * ((u - aa) * (bb - u)).max(0.0).sqrt() / (2.0 * PI)
            }
            Family::Interval { a, b, factor } => {
                if x <= *a || x >= *b {
                    return 0.0;
                }
                ((x - a) * (b - x)).max(0.0).sqrt() * poly3(factor, x) / (2.0 * PI)
            }
        }
    }

    /// Unnormalized mass of `(−∞, x]` from the family's antiderivatives.
    fn cdf_raw(&self, x: f64) -> f64 {
        match &self.family {
            Family::OneCut { a, b0 } => {
                if x <= -a {
                    return 0.0;
                }
                if x >= *a {
                    return self.mass;
                }
                // ∫₀ˣ y²√(a²−y²) = (x/8)(2x²−a²)√(a²−x²) + (a⁴/8)·asin(x/a)
                // ∫₀ˣ   √(a²−y²) = (x/2)√(a²−x²) + (a²/2)·asin(x/a)
                let root = (a * a - x * x).max(0.0).sqrt();
                let asn = (x / a).clamp(-1.0, 1.0).asin();
                let i2 = x / 8.0 * (2.0 * x * x - a * a) * root + a.powi(4) / 8.0 * asn;
                let i0 = 0.5 * x * root + 0.5 * a * a * asn;
                0.5 * self.mass + (0.5 * i2 + b0 * i0) / PI
            }
            Family::TwoCut { a, b } => {
                let (aa, bb) = (a * a, b * b);
                let mid = 0.5 * (aa + bb);
                let rad = 0.5 * (bb - aa);
                // Semicircle antiderivative in u = x²: H(u) = (v/2)√(r²−v²)
                // + (r²/2)·asin(v/r), v = u − mid; half the mass sits on each
                // side, so reflect for x < 0.
                let side = |u: f64| -> f64 {
                    // mass of [a, √u] on the right-hand interval
                    let v = (u - mid).clamp(-rad, rad);
                    let h = 0.5 * v * (rad * rad - v * v).max(0.0).sqrt()
                        + 0.5 * rad * rad * (v / rad).clamp(-1.0, 1.0).asin();
                    let h_lo = -0.25 * PI * rad * rad; // H at u = a²
                    (h - h_lo) / (4.0 * PI)
                };
                if x <= -b {
                    0.0
                } else if x < -a {
                    0.5 * self.mass - side(x * x)
                } else if x <= *a {
                    0.5 * self.mass
                } else if x < *b {
                    0.5 * self.mass + side(x * x)
                } else {
                    self.mass
                }
            }
            Family::Interval { a, b, factor } => {
                if x <= *a {
                    return 0.0;
                }
                if x >= *b {
                    return self.mass;
                }
                // Smooth θ-substituted integrand: x = mid + rad·cosθ turns the
                // √ edges into sin²θ.
                let mid = 0.5 * (a + b);
                let rad = 0.5 * (b - a);
                let theta_x = ((x - mid) / rad).clamp(-1.0, 1.0).acos();
                adaptive_simpson(
                    |th| {
                        let (s, c) = th.sin_cos();
                        rad * rad * s * s * poly3(factor, mid + rad * c) / (2.0 * PI)
                    },
                    theta_x,
                    PI,
                    1e-13,
                )
            }
        }
    }

    /// Cumulative distribution function: monotone, 0 below the support,
    /// 1 above it, constant across a two-cut gap.
    pub fn cdf(&self, x: f64) -> f64 {
        (self.cdf_raw(x) / self.mass).clamp(0.0, 1.0)
    }

    /// Monotone inverse of [`Self::cdf`], resolved by a bracket table plus
    /// bisection to `|cdf(x) − u| ≤ 1e−12`. For a two-cut measure, levels at
    /// the gap mass return the inner edge of the left interval.
    pub fn quantile(&self, u: f64) -> Result<f64, MeasureError> {
        if !(u > 0.0 && u < 1.0) {
            return Err(MeasureError::QuantileRange(u));
        }
        let last = self.tables.len() - 1;
        for (k, table) in self.tables.iter().enumerate() {
            let top = *table.us.last().expect("tables are nonempty");
            if u <= top || k == last {
                // Binary search for the bracketing table cell.
                let j = match table.us.binary_search_by(|v| v.partial_cmp(&u).expect("finite")) {
                    Ok(j) => return Ok(table.xs[j]),
                    Err(j) => j.clamp(1, table.us.len() - 1),
                };
                let (lo, hi) = (table.xs[j - 1], table.xs[j]);
                if table.us[j] == table.us[j - 1] {
                    return Ok(lo);
                }
                return Ok(bisect_root(|x| self.cdf(x) - u, lo, hi, 1e-13));
            }
        }
        unreachable!("loop returns on the last table")
    }

    /// `∫ x^k dμ` (`k ≤ 8`). Odd moments of symmetric families are returned as
    /// an exact 0; everything else uses the edge-adapted Chebyshev rule, which
    /// is exact for these polynomial integrands.
    pub fn moment(&self, k: u32) -> f64 {
        assert!(k <= 8, "moments are provided up to order 8, got {k}");
        let ki = k as i32;
        match &self.family {
            Family::OneCut { a, b0 } => {
                if k % 2 == 1 {
                    return 0.0;
                }
                sqrt_edge_integral(|x| x.powi(ki) * (0.5 * x * x + b0), -a, *a, 32) / PI
            }
            Family::TwoCut { a, b } => {
                if k % 2 == 1 {
                    return 0.0;
                }
                // In u = x²: (1/2π) ∫ u^{k/2} √((u−a²)(b²−u)) du.
                sqrt_edge_integral(|u| u.powi(ki / 2), a * a, b * b, 32) / (2.0 * PI)
            }
            Family::Interval { a, b, factor } => {
                let symmetric = *a == -*b && factor[1] == 0.0 && factor[3] == 0.0;
                if symmetric && k % 2 == 1 {
                    return 0.0;
                }
                sqrt_edge_integral(|x| x.powi(ki) * poly3(factor, x), *a, *b, 32) / (2.0 * PI)
            }
        }
    }

    /// `n` i.i.d. draws by inverse-CDF over a seeded uniform stream;
    /// deterministic given `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        assert!(n >= 1, "sample needs n >= 1");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                // gen::<f64>() ∈ [0,1); reject the measure-zero exact 0.0 so
                // the quantile precondition holds.
                let mut u: f64 = rng.gen();
                while u <= 0.0 {
                    u = rng.gen();
                }
                self.quantile(u).expect("u lies in (0,1)")
            })
            .collect()
    }

    /// Deterministic `(i − ½)/n` quantile placement — the discrete
    /// configuration closest to the measure in Wasserstein distance.
    pub fn quantile_grid(&self, n: usize) -> Vec<f64> {
        assert!(n >= 1, "quantile_grid needs n >= 1");
        (1..=n)
            .map(|i| {
                let u = (i as f64 - 0.5) / n as f64;
                self.quantile(u).expect("u lies in (0,1)")
            })
            .collect()
    }

    /// JSON object with fields `kind`, `support` (array of `[lo, hi]`) and
    /// `params` (family-specific object).
    pub fn to_json_value(&self) -> serde_json::Value {
        let support: Vec<[f64; 2]> = self.support.iter().map(|&(lo, hi)| [lo, hi]).collect();
        let (kind, params) = match &self.family {
            Family::OneCut { a, b0 } => (
                MeasureKind::OneCut,
                serde_json::json!({ "a": a, "b0": b0 }),
            ),
            Family::TwoCut { a, b } => (MeasureKind::TwoCut, serde_json::json!({ "a": a, "b": b })),
            Family::Interval { a, b, factor } => (
                MeasureKind::Interval,
                serde_json::json!({ "a": a, "b": b, "factor": factor }),
            ),
        };
        serde_json::json!({ "kind": kind, "support": support, "params": params })
    }

    /// Pretty-printed [`Self::to_json_value`].
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("value serializes")
    }

    /// Parses the JSON schema written by [`Self::to_json`], revalidating the
    /// parameters and cross-checking the stored support.
    pub fn from_json(s: &str) -> Result<Self, MeasureError> {
        #[derive(Deserialize)]
        struct Raw {
            kind: MeasureKind,
            support: Vec<[f64; 2]>,
            params: serde_json::Value,
        }
        let raw: Raw = serde_json::from_str(s).map_err(|e| MeasureError::Json(e.to_string()))?;
        let get = |name: &str| -> Result<f64, MeasureError> {
            raw.params
                .get(name)
                .and_then(serde_json::Value::as_f64)
                .ok_or_else(|| MeasureError::Json(format!("missing numeric param `{name}`")))
        };
        let m = match raw.kind {
            MeasureKind::OneCut => Self::one_cut(get("a")?, get("b0")?)?,
            MeasureKind::TwoCut => Self::two_cut(get("a")?, get("b")?)?,
            MeasureKind::Interval => {
                let f: [f64; 4] = serde_json::from_value(
                    raw.params
                        .get("factor")
                        .cloned()
                        .ok_or_else(|| MeasureError::Json("missing param `factor`".into()))?,
                )
                .map_err(|e| MeasureError::Json(e.to_string()))?;
                Self::interval(get("a")?, get("b")?, f)?
            }
        };
        if raw.support.len() != m.support.len()
            || raw
                .support
                .iter()
                .zip(&m.support)
                .any(|(s, &(lo, hi))| (s[0] - lo).abs() > 1e-9 || (s[1] - hi).abs() > 1e-9)
        {
            return Err(MeasureError::Json(
                "stored support disagrees with the family parameters".into(),
            ));
        }
        Ok(m)
    }
}

impl Density for MeasureDescriptor {
    fn support(&self) -> Vec<(f64, f64)> {
        self.support.clone()
    }
    fn density(&self, x: f64) -> f64 {
        MeasureDescriptor::density(self, x)
    }
}

/// `∫ g dμ` for any [`Density`] by adaptive quadrature in the θ variable
/// (`x = mid + rad·cosθ`), which flattens √-type support edges into smooth
/// `sin` factors. Absolute tolerance `tol` is split across support intervals.
pub fn integrate_against<D: Density + ?Sized>(m: &D, g: impl Fn(f64) -> f64, tol: f64) -> f64 {
    let support = m.support();
    let per = tol / support.len().max(1) as f64;
    support
        .iter()
        .map(|&(lo, hi)| {
            let mid = 0.5 * (lo + hi);
            let rad = 0.5 * (hi - lo);
            adaptive_simpson(
                |th| {
                    let (s, c) = th.sin_cos();
                    let x = mid + rad * c;
                    m.density(x) * g(x) * rad * s
                },
                0.0,
                PI,
                per,
            )
        })
        .sum()
}

/// `∫ x^k dμ` for any [`Density`] by quadrature (no symmetry shortcuts) —
/// the generic counterpart of [`MeasureDescriptor::moment`].
pub fn numeric_moment<D: Density + ?Sized>(m: &D, k: u32) -> f64 {
    integrate_against(m, |x| x.powi(k as i32), 1e-12)
}

/// The equilibrium (free-energy–minimizing) measure for coupling `c`:
/// one-cut for `c ≥ −2`, two-cut for `c < −2`.
pub fn equilibrium_measure(c: f64) -> MeasureDescriptor {
    assert!(c.is_finite(), "coupling must be finite, got {c}");
    if c >= -2.0 {
        // Ordered so that integer couplings come out exact (e.g. c = −2 gives
        // a² = 4 and b₀ = 0 with no rounding).
        let a2 = 2.0 * ((c * c + 12.0).sqrt() - c) / 3.0;
        let b0 = (c + (0.25 * c * c + 3.0).sqrt()) / 3.0;
        MeasureDescriptor::one_cut(a2.sqrt(), b0.max(0.0))
            .expect("closed-form one-cut parameters are valid")
    } else {
        MeasureDescriptor::two_cut((-2.0 - c).sqrt(), (2.0 - c).sqrt())
            .expect("closed-form two-cut parameters are valid")
    }
}
