//! Convergence observables for the particle dynamics: Voiculescu free entropy
//! `Σ_V(μ) = −∬ log|x−y| dμ dμ + ∫ V dμ`, the entropy-dissipation functional
//! `2∫|½V′ − Hμ|² dμ` in its empirical form, and order-`p` Wasserstein
//! distances between an ordered particle configuration and an analytic
//! measure (1-D optimal transport by quantile matching).
//!
//! The time series of these quantities, [`ConvergenceSeries`], round-trips
//! through a fixed-header CSV format with 17-significant-digit floats.

use crate::equilibrium::{integrate_against, Density, MeasureDescriptor};
use crate::potential::QuarticPotential;
use crate::quad::{adaptive_simpson, int_log_abs};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// Errors from observable evaluation and series (de)serialization.
#[derive(Debug, Error, PartialEq)]
pub enum ObservableError {
    /// Two particles coincide, so the logarithmic interaction diverges.
    #[error("coincident particles at index {index}")]
    Collision { index: usize },
    /// A CSV line failed to parse or violated a series invariant.
    #[error("csv error on line {line}: {reason}")]
    Csv { line: usize, reason: String },
}

/// One recorded instant of a simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    /// Simulation time.
    pub t: f64,
    /// Order-1 Wasserstein distance to the reference measure.
    pub w1: f64,
    /// Order-2 Wasserstein distance to the reference measure.
    pub w2: f64,
    /// Optional extra-order Wasserstein distance (the `--p` column).
    pub wp: Option<f64>,
    /// Empirical free entropy of the configuration.
    pub sigma_v: f64,
    /// Empirical dissipation functional of the configuration.
    pub dissipation: f64,
    /// First empirical moment.
    pub m1: f64,
    /// Second empirical moment.
    pub m2: f64,
    /// Smallest adjacent gap (0 by convention for N < 2).
    pub min_gap: f64,
}

/// CSV header for [`ConvergenceSeries`].
pub const SERIES_HEADER: &str = "t,w1,w2,wp,sigma_v,dissipation,m1,m2,min_gap";

/// A time-ordered list of [`SeriesRow`]s with strictly increasing `t` and all
/// entries finite.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvergenceSeries {
    rows: Vec<SeriesRow>,
}

impl ConvergenceSeries {
    /// Empty series.
    pub fn new() -> Self {
        Self::default()
    }

    /// Recorded rows in time order.
    pub fn rows(&self) -> &[SeriesRow] {
        &self.rows
    }

    /// Appends a row, asserting the series invariants (finite entries,
    /// strictly increasing time).
    pub fn push(&mut self, row: SeriesRow) {
        let finite = [
            row.t,
            row.w1,
            row.w2,
            row.wp.unwrap_or(0.0),
            row.sigma_v,
            row.dissipation,
            row.m1,
            row.m2,
            row.min_gap,
        ]
        .iter()
        .all(|v| v.is_finite());
        assert!(finite, "series entries must be finite at t = {}", row.t);
        if let Some(last) = self.rows.last() {
            assert!(row.t > last.t, "series time must be strictly increasing");
        }
        self.rows.push(row);
    }

    /// Serializes to CSV: the fixed header, one row per line, every float
    /// with 17 significant digits; a missing `wp` prints as an empty field.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SERIES_HEADER);
        out.push('\n');
        for r in &self.rows {
            let fields = [
                fmt17(r.t),
                fmt17(r.w1),
                fmt17(r.w2),
                r.wp.map(fmt17).unwrap_or_default(),
                fmt17(r.sigma_v),
                fmt17(r.dissipation),
                fmt17(r.m1),
                fmt17(r.m2),
                fmt17(r.min_gap),
            ];
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// Parses the CSV produced by [`Self::to_csv`]. Lines starting with `#`
    /// (trailer comments) and blank lines are skipped; the header must match
    /// exactly and the series invariants are enforced.
    pub fn from_csv(text: &str) -> Result<Self, ObservableError> {
        let mut series = ConvergenceSeries::new();
        let mut saw_header = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = idx + 1;
            if !saw_header {
                if line != SERIES_HEADER {
                    return Err(ObservableError::Csv {
                        line: lineno,
                        reason: format!("expected header `{SERIES_HEADER}`"),
                    });
                }
                saw_header = true;
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 9 {
                return Err(ObservableError::Csv {
                    line: lineno,
                    reason: format!("expected 9 fields, found {}", fields.len()),
                });
            }
            let num = |s: &str| -> Result<f64, ObservableError> {
                s.parse::<f64>().map_err(|_| ObservableError::Csv {
                    line: lineno,
                    reason: format!("bad float `{s}`"),
                })
            };
            let wp = if fields[3].is_empty() {
                None
            } else {
                Some(num(fields[3])?)
            };
            let row = SeriesRow {
                t: num(fields[0])?,
                w1: num(fields[1])?,
                w2: num(fields[2])?,
                wp,
                sigma_v: num(fields[4])?,
                dissipation: num(fields[5])?,
                m1: num(fields[6])?,
                m2: num(fields[7])?,
                min_gap: num(fields[8])?,
            };
            let finite = row.t.is_finite()
                && row.w1.is_finite()
                && row.w2.is_finite()
                && row.wp.map_or(true, |v| v.is_finite())
                && row.sigma_v.is_finite()
                && row.dissipation.is_finite()
                && row.m1.is_finite()
                && row.m2.is_finite()
                && row.min_gap.is_finite();
            if !finite {
                return Err(ObservableError::Csv {
                    line: lineno,
                    reason: "non-finite entry".into(),
                });
            }
            if let Some(last) = series.rows.last() {
                if row.t <= last.t {
                    return Err(ObservableError::Csv {
                        line: lineno,
                        reason: format!("time must increase, {} after {}", row.t, last.t),
                    });
                }
            }
            series.rows.push(row);
        }
        if !saw_header {
            return Err(ObservableError::Csv {
                line: 1,
                reason: "missing header".into(),
            });
        }
        Ok(series)
    }
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Rejects configurations the pairwise observables cannot handle: any
/// non-finite coordinate panics (precondition violation); an exactly repeated
/// coordinate is a [`ObservableError::Collision`].
fn check_ascending(xs: &[f64]) -> Result<(), ObservableError> {
    assert!(
        xs.iter().all(|x| x.is_finite()),
        "positions must be finite"
    );
    for (i, w) in xs.windows(2).enumerate() {
        if w[1] == w[0] {
            return Err(ObservableError::Collision { index: i });
        }
        assert!(w[1] > w[0], "positions must be strictly ascending");
    }
    Ok(())
}

/// Empirical free entropy
/// `(1/N)Σ_i V(x_i) − (1/N²)Σ_{i≠j} log|x_i − x_j|` (diagonal excluded).
pub fn sigma_v_empirical(positions: &[f64], c: f64) -> Result<f64, ObservableError> {
    check_ascending(positions)?;
    let n = positions.len();
    assert!(n >= 1, "need at least one particle");
    let pot = QuarticPotential::new(c);
    let v_mean = positions.iter().map(|&x| pot.eval(x)).sum::<f64>() / n as f64;
    let mut log_sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            log_sum += (positions[j] - positions[i]).ln();
        }
    }
    Ok(v_mean - 2.0 * log_sum / (n * n) as f64)
}

/// Empirical dissipation `2·(1/N)Σ_i F_i²` with
/// `F_i = ½V′(x_i) − (1/N)Σ_{j≠i} 1/(x_i − x_j)`; equals `−dE/dt` of the
/// deterministic particle flow.
pub fn dissipation_empirical(positions: &[f64], c: f64) -> Result<f64, ObservableError> {
    check_ascending(positions)?;
    let n = positions.len();
    assert!(n >= 1, "need at least one particle");
    let pot = QuarticPotential::new(c);
    let inter = interaction_sums(positions);
    let sum: f64 = positions
        .iter()
        .zip(&inter)
        .map(|(&x, &s)| {
            let f = 0.5 * pot.grad(x) - s / n as f64;
            f * f
        })
        .sum();
    Ok(2.0 * sum / n as f64)
}

/// Order-`p` Wasserstein distance between the ascending `positions` and the
/// measure `m`, by the midpoint quantile coupling
/// `W_p^p ≈ (1/N)Σ_i |x_(i) − quantile(m, (i−½)/N)|^p` (the 1-D optimal
/// coupling, with O(1/N) discretization bias). `p ∈ [1, 8]`.
pub fn wasserstein_p(positions: &[f64], m: &MeasureDescriptor, p: f64) -> f64 {
    assert!((1.0..=8.0).contains(&p), "wasserstein order must be in [1, 8]");
    assert!(!positions.is_empty(), "need at least one particle");
    assert!(
        positions.windows(2).all(|w| w[1] >= w[0]),
        "positions must be ascending"
    );
    let quants = m.quantile_grid(positions.len());
    wp_from_quantiles(positions, &quants, p)
}

/// Shared Wasserstein core against precomputed quantiles (the simulation loop
/// reuses one quantile grid across every recorded row).
pub(crate) fn wp_from_quantiles(positions: &[f64], quants: &[f64], p: f64) -> f64 {
    assert_eq!(positions.len(), quants.len());
    let n = positions.len();
    let mean = positions
        .iter()
        .zip(quants)
        .map(|(&x, &q)| (x - q).abs().powf(p))
        .sum::<f64>()
        / n as f64;
    mean.powf(1.0 / p)
}

/// `Σ_{j≠i} 1/(x_i − x_j)` for every `i` — the O(N²) kernel shared by the
/// particle drift and the dissipation functional. Row sums are accumulated in
/// ascending `j` order, so the result is bitwise identical for any worker
/// count.
pub(crate) fn interaction_sums(xs: &[f64]) -> Vec<f64> {
    interaction_sums_with(xs, worker_count())
}

/// Worker cap: `FREEFP_THREADS` if set to a positive integer (clamped to 16),
/// otherwise the machine's available parallelism (also clamped to 16).
pub(crate) fn worker_count() -> usize {
    if let Ok(raw) = std::env::var("FREEFP_THREADS") {
        if let Ok(k) = raw.trim().parse::<usize>() {
            if k >= 1 {
                return k.min(16);
            }
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get().min(16))
        .unwrap_or(1)
}

pub(crate) fn interaction_sums_with(xs: &[f64], workers: usize) -> Vec<f64> {
    let n = xs.len();
    let row = |i: usize| -> f64 {
        let xi = xs[i];
        let mut acc = 0.0;
        for (j, &xj) in xs.iter().enumerate() {
            if j != i {
                acc += 1.0 / (xi - xj);
            }
        }
        acc
    };
    if workers <= 1 || n < 512 {
        return (0..n).map(row).collect();
    }
    // Fixed 16-block decomposition: the work split never depends on the
    // worker count, only on N, so scheduling cannot change the arithmetic.
    const BLOCKS: usize = 16;
    let chunk = n.div_ceil(BLOCKS);
    let mut out = vec![0.0; n];
    let threads = workers.min(BLOCKS);
    std::thread::scope(|scope| {
        let mut per_thread: Vec<Vec<(usize, &mut [f64])>> =
            (0..threads).map(|_| Vec::new()).collect();
        for (b, slab) in out.chunks_mut(chunk).enumerate() {
            per_thread[b % threads].push((b, slab));
        }
        for group in per_thread {
            let row = &row;
            scope.spawn(move || {
                for (b, slab) in group {
                    let base = b * chunk;
                    for (k, slot) in slab.iter_mut().enumerate() {
                        *slot = row(base + k);
                    }
                }
            });
        }
    });
    out
}

/// Free entropy `Σ_V(μ) = −∬ log|x−y| dμ dμ + ∫ V dμ` of an analytic density
/// by adaptive quadrature, absolute tolerance ~1e−6. The logarithmic diagonal
/// is handled by a strip of width `1e−4 ×` (interval width): inside the strip
/// the density is frozen at `ρ(x)` and the log layer integrated exactly;
/// outside, the integrand is smooth.
pub fn sigma_v_analytic<D: Density + ?Sized>(m: &D, c: f64) -> f64 {
    let pot = QuarticPotential::new(c);
    let v_int = integrate_against(m, |x| pot.eval(x), 1e-9);
    v_int - log_energy(m, 3e-7)
}

/// `∬ log|x−y| ρ(x)ρ(y) dx dy` with outer tolerance `tol` (inner integrals
/// run two orders tighter).
fn log_energy<D: Density + ?Sized>(m: &D, tol: f64) -> f64 {
    let support = m.support();
    let inner_tol = 0.01 * tol;
    let mut acc = 0.0;
    for &(lo, hi) in &support {
        let mid = 0.5 * (lo + hi);
        let rad = 0.5 * (hi - lo);
        acc += adaptive_simpson(
            |theta: f64| {
                let x = mid + rad * theta.cos();
                let w = m.density(x) * rad * theta.sin();
                if w == 0.0 {
                    0.0
                } else {
                    w * log_potential(m, &support, x, inner_tol)
                }
            },
            0.0,
            PI,
            tol,
        );
    }
    acc
}

/// `∫ log|x−y| ρ(y) dy` over every support interval, strip-corrected where
/// `y` approaches `x`.
fn log_potential<D: Density + ?Sized>(
    m: &D,
    support: &[(f64, f64)],
    x: f64,
    tol: f64,
) -> f64 {
    let mut acc = 0.0;
    for &(lo, hi) in support {
        let eps = 1e-4 * (hi - lo);
        if x >= lo - eps && x <= hi + eps {
            let s_lo = (x - eps).max(lo);
            let s_hi = (x + eps).min(hi);
            acc += m.density(x.clamp(lo, hi)) * int_log_abs(s_lo, s_hi, x);
            if s_lo > lo {
                acc += adaptive_simpson(
                    |y: f64| (x - y).abs().ln() * m.density(y),
                    lo,
                    s_lo,
                    tol,
                );
            }
            if s_hi < hi {
                acc += adaptive_simpson(
                    |y: f64| (x - y).abs().ln() * m.density(y),
                    s_hi,
                    hi,
                    tol,
                );
            }
        } else {
            let mid = 0.5 * (lo + hi);
            let rad = 0.5 * (hi - lo);
            acc += adaptive_simpson(
                |theta: f64| {
                    let y = mid + rad * theta.cos();
                    (x - y).abs().ln() * m.density(y) * rad * theta.sin()
                },
                0.0,
                PI,
                tol,
            );
        }
    }
    acc
}
