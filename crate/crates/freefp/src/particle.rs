//! Interacting-particle discretization of the mean-field dynamics: `N`
//! ordered particles obeying
//! `dX_i = −½V′(X_i) dt + (1/N)Σ_{j≠i} dt/(X_i−X_j) + √(2/N) dB_i`,
//! whose empirical measure approximates the PDE solution. The Brownian term
//! carries the vanishing `1/√N` factor (switchable off entirely, since the
//! limiting equation is deterministic), and explicit Euler steps are guarded
//! by a recursive gap-protecting substep rule so particles can never cross.

use crate::equilibrium::equilibrium_measure;
use crate::observables::{
    dissipation_empirical, interaction_sums, sigma_v_empirical, wp_from_quantiles,
    ConvergenceSeries, SeriesRow,
};
use crate::potential::QuarticPotential;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

/// Runtime confinement box: accepted steps must keep every particle inside
/// `[−BOX_BOUND, BOX_BOUND]` (the dynamics preserves compact support, so an
/// escape signals a diverging discretization and trips an assertion).
pub const BOX_BOUND: f64 = 100.0;

/// Maximum recursive substep depth before a configuration is declared stiff.
const MAX_SUBSTEP_DEPTH: u32 = 30;

/// Errors from particle construction, initial-condition parsing, and stepping.
#[derive(Debug, Error)]
pub enum SimError {
    /// Two particles coincide (or the input ordering is broken).
    #[error("coincident particles at index {index} (t = {time})")]
    Collision { index: usize, time: f64 },
    /// The substep recursion exceeded its depth bound: the configuration is
    /// too stiff for the base step.
    #[error("substep depth exceeded {MAX_SUBSTEP_DEPTH} for adjacent pair {pair} at t = {time}")]
    Stiffness { pair: usize, time: f64 },
    /// The initial-condition spec string does not match the grammar.
    #[error("initial-condition spec `{spec}` invalid at byte {position}: {reason}")]
    Parse {
        spec: String,
        position: usize,
        reason: String,
    },
    /// Parsed initial data is unusable (wrong count, non-finite entries, …).
    #[error("invalid initial data: {0}")]
    Validation(String),
    /// `file:` initial conditions could not be read.
    #[error("could not read initial positions: {0}")]
    Io(#[from] std::io::Error),
}

/// Whether the Brownian term is included.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseMode {
    /// `√(2/N)`-scaled noise — the finite-`N` stochastic system whose
    /// internal-energy term vanishes in the mean-field limit.
    Vanishing,
    /// No noise: the deterministic gradient flow, for which the entropy
    /// dissipation identity is exact.
    None,
}

/// Simulation parameters.
#[derive(Debug, Clone)]
pub struct SimConfig {
    /// Quadratic coupling of the potential.
    pub c: f64,
    /// Particle count.
    pub n: usize,
    /// Base time step (`0 < dt ≤ 0.1`).
    pub dt: f64,
    /// Final time.
    pub t_final: f64,
    /// RNG seed (noise stream; also used by random initial conditions).
    pub seed: u64,
    /// Brownian term on/off.
    pub noise_mode: NoiseMode,
    /// A substep is accepted only if no adjacent gap shrinks below this
    /// fraction of its current value (`0 < min_gap_factor ≤ 0.5`).
    pub min_gap_factor: f64,
    /// Record observables every this many base steps (≥ 1).
    pub record_every: usize,
    /// Optional extra Wasserstein order for the recorded series (`∈ [1, 8]`).
    pub wp_order: Option<f64>,
}

impl SimConfig {
    /// Config with the default guards: vanishing noise, `min_gap_factor`
    /// 0.1, recording every step, no extra Wasserstein column.
    pub fn new(c: f64, n: usize, dt: f64, t_final: f64, seed: u64) -> Self {
        Self {
            c,
            n,
            dt,
            t_final,
            seed,
            noise_mode: NoiseMode::Vanishing,
            min_gap_factor: 0.1,
            record_every: 1,
            wp_order: None,
        }
    }

    fn validate(&self) {
        assert!(self.c.is_finite(), "coupling must be finite");
        assert!(self.n >= 1, "need at least one particle");
        assert!(
            self.dt > 0.0 && self.dt <= 0.1,
            "base step must lie in (0, 0.1], got {}",
            self.dt
        );
        assert!(self.t_final > 0.0, "final time must be positive");
        assert!(
            self.min_gap_factor > 0.0 && self.min_gap_factor <= 0.5,
            "min_gap_factor must lie in (0, 0.5], got {}",
            self.min_gap_factor
        );
        assert!(self.record_every >= 1, "record_every must be at least 1");
        if let Some(p) = self.wp_order {
            assert!(
                (1.0..=8.0).contains(&p),
                "extra Wasserstein order must lie in [1, 8]"
            );
        }
    }
}

/// Ordered particle configuration with its clock and opaque noise stream.
#[derive(Debug, Clone)]
pub struct ParticleState {
    positions: Vec<f64>,
    time: f64,
    rng: ChaCha8Rng,
}

impl ParticleState {
    /// Wraps strictly ascending, finite positions at `t = 0` with a seeded
    /// noise stream.
    pub fn new(positions: Vec<f64>, seed: u64) -> Result<Self, SimError> {
        if positions.is_empty() {
            return Err(SimError::Validation("no particles".into()));
        }
        if let Some(bad) = positions.iter().position(|x| !x.is_finite()) {
            return Err(SimError::Validation(format!(
                "position {bad} is not finite"
            )));
        }
        if let Some(i) = positions.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(SimError::Collision {
                index: i,
                time: 0.0,
            });
        }
        Ok(Self {
            positions,
            time: 0.0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    /// The ordered particle positions.
    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    /// Current simulation time.
    pub fn time(&self) -> f64 {
        self.time
    }
}

/// Drift field: component `i` equals
/// `−½V′(x_i) + (1/N)Σ_{j≠i} 1/(x_i − x_j)` (steepest descent of the
/// discrete energy). O(N²).
pub fn drift(state: &ParticleState, c: f64) -> Result<Vec<f64>, SimError> {
    drift_of(&state.positions, c, state.time)
}

fn drift_of(xs: &[f64], c: f64, time: f64) -> Result<Vec<f64>, SimError> {
    if let Some(i) = xs.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(SimError::Collision { index: i, time });
    }
    let pot = QuarticPotential::new(c);
    let n = xs.len() as f64;
    let inter = interaction_sums(xs);
    Ok(xs
        .iter()
        .zip(inter)
        .map(|(&x, s)| -0.5 * pot.grad(x) + s / n)
        .collect())
}

/// Advances one base step `cfg.dt`, recursively halving into substeps until
/// no adjacent gap would shrink below `min_gap_factor ×` its current value in
/// a single substep (noise included in the proposal). Accepted positions are
/// re-checked ascending and against the confinement box.
pub fn step(state: &mut ParticleState, cfg: &SimConfig) -> Result<(), SimError> {
    cfg.validate();
    advance(state, cfg, cfg.dt, 0)?;
    debug_assert!(state.positions.windows(2).all(|w| w[1] > w[0]));
    for (i, &x) in state.positions.iter().enumerate() {
        assert!(
            x.abs() <= BOX_BOUND,
            "particle {i} escaped the confinement box [-{BOX_BOUND}, {BOX_BOUND}] at t = {}",
            state.time
        );
    }
    Ok(())
}

fn advance(state: &mut ParticleState, cfg: &SimConfig, h: f64, depth: u32) -> Result<(), SimError> {
    let n = state.positions.len();
    let d = drift_of(&state.positions, cfg.c, state.time)?;
    // The noise draw belongs to this attempt and is consumed whether or not
    // the attempt is accepted, so the stream position depends only on the
    // attempt sequence — never on how acceptance is decided.
    let proposed: Vec<f64> = match cfg.noise_mode {
        NoiseMode::Vanishing => {
            let amp = (2.0 * h / n as f64).sqrt();
            state
                .positions
                .iter()
                .zip(&d)
                .map(|(&x, &di)| {
                    let xi: f64 = state.rng.sample(StandardNormal);
                    x + di * h + amp * xi
                })
                .collect()
        }
        NoiseMode::None => state
            .positions
            .iter()
            .zip(&d)
            .map(|(&x, &di)| x + di * h)
            .collect(),
    };
    let mut offending = None;
    for i in 0..n.saturating_sub(1) {
        let old_gap = state.positions[i + 1] - state.positions[i];
        let new_gap = proposed[i + 1] - proposed[i];
        // NaN-safe: any non-comparable proposal is rejected too.
        if !(new_gap >= cfg.min_gap_factor * old_gap) {
            offending = Some(i);
            break;
        }
    }
    match offending {
        None => {
            state.positions = proposed;
            state.time += h;
            Ok(())
        }
        Some(pair) if depth >= MAX_SUBSTEP_DEPTH => Err(SimError::Stiffness {
            pair,
            time: state.time,
        }),
        Some(_) => {
            advance(state, cfg, 0.5 * h, depth + 1)?;
            advance(state, cfg, 0.5 * h, depth + 1)
        }
    }
}

/// Runs the dynamics to `t_final`, recording the observable series against
/// `equilibrium_measure(cfg.c)` every `record_every` base steps (plus the
/// initial and final instants). Initial labels are irrelevant: positions are
/// sorted on entry. Returns the series together with the final state.
pub fn simulate(
    cfg: &SimConfig,
    init: &[f64],
) -> Result<(ConvergenceSeries, ParticleState), SimError> {
    cfg.validate();
    if init.len() != cfg.n {
        return Err(SimError::Validation(format!(
            "initial condition supplies {} positions, config expects {}",
            init.len(),
            cfg.n
        )));
    }
    let mut sorted = init.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("positions must be comparable"));
    let mut state = ParticleState::new(sorted, cfg.seed)?;
    let reference = equilibrium_measure(cfg.c);
    let quants = reference.quantile_grid(cfg.n);
    let n_steps = ((cfg.t_final / cfg.dt).round() as u64).max(1);
    let mut series = ConvergenceSeries::new();
    record(&mut series, &state, cfg, &quants);
    for k in 1..=n_steps {
        step(&mut state, cfg)?;
        if k % cfg.record_every as u64 == 0 || k == n_steps {
            record(&mut series, &state, cfg, &quants);
        }
    }
    Ok((series, state))
}

pub(crate) fn record(
    series: &mut ConvergenceSeries,
    state: &ParticleState,
    cfg: &SimConfig,
    quants: &[f64],
) {
    let xs = &state.positions;
    let n = xs.len();
    let msg = "the gap rule keeps particles separated";
    let min_gap = xs
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    series.push(SeriesRow {
        t: state.time,
        w1: wp_from_quantiles(xs, quants, 1.0),
        w2: wp_from_quantiles(xs, quants, 2.0),
        wp: cfg.wp_order.map(|p| wp_from_quantiles(xs, quants, p)),
        sigma_v: sigma_v_empirical(xs, cfg.c).expect(msg),
        dissipation: dissipation_empirical(xs, cfg.c).expect(msg),
        m1: xs.iter().sum::<f64>() / n as f64,
        m2: xs.iter().map(|x| x * x).sum::<f64>() / n as f64,
        min_gap: if n < 2 { 0.0 } else { min_gap },
    });
}

/// Parses an initial-condition spec into `n` finite, strictly ascending
/// positions, deterministically under `seed`. Grammar:
///
/// * `uniform:LO,HI` — `n` i.i.d. uniform draws on `[LO, HI)`, sorted;
/// * `equilibrium` — the midpoint quantiles of `equilibrium_measure(c)`;
/// * `twopoint:X1,X2,W` — `round(W·n)` particles near `X1` and the rest near
///   `X2` (`W ∈ [0, 1]`), each offset by `1e−6·(i/n)` with `i` the global
///   index, which keeps the configuration strictly ascending;
/// * `file:PATH` — exactly `n` reals, one per line.
///
/// Any remaining coincident pair is separated by the same deterministic
/// `1e−6·(i/n)` offset applied to the later point.
pub fn parse_initial(spec: &str, n: usize, seed: u64, c: f64) -> Result<Vec<f64>, SimError> {
    assert!(n >= 1, "need at least one particle");
    let parse_err = |position: usize, reason: String| SimError::Parse {
        spec: spec.to_owned(),
        position,
        reason,
    };
    let number = |field: &str, position: usize| -> Result<f64, SimError> {
        let v: f64 = field
            .trim()
            .parse()
            .map_err(|_| parse_err(position, format!("expected a number, found `{field}`")))?;
        if !v.is_finite() {
            return Err(parse_err(position, "number must be finite".into()));
        }
        Ok(v)
    };
    let fields = |body: &str, base: usize, want: usize| -> Result<Vec<(usize, String)>, SimError> {
        let mut out = Vec::new();
        let mut offset = base;
        for part in body.split(',') {
            out.push((offset, part.to_owned()));
            offset += part.len() + 1;
        }
        if out.len() != want {
            return Err(parse_err(
                base,
                format!("expected {want} comma-separated fields, found {}", out.len()),
            ));
        }
        Ok(out)
    };

    let mut xs = if let Some(body) = spec.strip_prefix("uniform:") {
        let fs = fields(body, "uniform:".len(), 2)?;
        let lo = number(&fs[0].1, fs[0].0)?;
        let hi = number(&fs[1].1, fs[1].0)?;
        if !(lo < hi) {
            return Err(parse_err(fs[0].0, format!("need LO < HI, got {lo} ≥ {hi}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut xs: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..hi)).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).expect("draws are finite"));
        xs
    } else if spec == "equilibrium" {
        equilibrium_measure(c).quantile_grid(n)
    } else if let Some(body) = spec.strip_prefix("twopoint:") {
        let fs = fields(body, "twopoint:".len(), 3)?;
        let x1 = number(&fs[0].1, fs[0].0)?;
        let x2 = number(&fs[1].1, fs[1].0)?;
        let w = number(&fs[2].1, fs[2].0)?;
        if !(0.0..=1.0).contains(&w) {
            return Err(parse_err(fs[2].0, format!("weight must be in [0, 1], got {w}")));
        }
        let k = ((w * n as f64).round() as usize).min(n);
        // Groups in ascending order of their centers, jittered by global index.
        let (first, first_count, second) = if x1 <= x2 { (x1, k, x2) } else { (x2, n - k, x1) };
        let mut xs = Vec::with_capacity(n);
        for i in 0..n {
            let center = if i < first_count { first } else { second };
            xs.push(center + 1e-6 * (i as f64 / n as f64));
        }
        xs
    } else if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)?;
        let mut xs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let v: f64 = t.parse().map_err(|_| {
                SimError::Validation(format!("line {} is not a number: `{t}`", lineno + 1))
            })?;
            if !v.is_finite() {
                return Err(SimError::Validation(format!(
                    "line {} is not finite",
                    lineno + 1
                )));
            }
            xs.push(v);
        }
        if xs.len() != n {
            return Err(SimError::Validation(format!(
                "file supplies {} positions, expected {n}",
                xs.len()
            )));
        }
        xs.sort_by(|a, b| a.partial_cmp(b).expect("values are finite"));
        xs
    } else {
        return Err(parse_err(
            0,
            "expected `uniform:LO,HI`, `equilibrium`, `twopoint:X1,X2,W`, or `file:PATH`".into(),
        ));
    };

    // Deterministic tie separation.
    for i in 1..xs.len() {
        if xs[i] <= xs[i - 1] {
            xs[i] = xs[i - 1] + 1e-6 * (i as f64 / n as f64);
        }
    }
    debug_assert!(xs.windows(2).all(|w| w[1] > w[0]));
    Ok(xs)
}
