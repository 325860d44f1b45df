//! Command-line driver for the `freefp` binary.
//!
//! Subcommands:
//!
//! * `equilibrium` — equilibrium-measure profile as JSON;
//! * `stationary` — census of stationary one-interval measures as JSON;
//! * `critical` — critical-measure diagnostics (moments, spectral polynomial,
//!   Descartes counts, identity residuals) as JSON;
//! * `simulate` — run the particle system, write final positions one per line;
//! * `converge` — run the particle system, write the observable series CSV;
//! * `selftest` — built-in invariant checks, pass/fail table.
//!
//! Exit codes: `0` success, `1` selftest failure, `2` usage error (bad flags,
//! unreadable/unwritable paths), `3` runtime simulation error. Output files
//! are staged next to their destination and atomically renamed, so a crash
//! never leaves a partial file; with no `--out` the payload goes to stdout.
//! Identical flags and seed produce byte-identical output. The environment
//! variable `FREEFP_THREADS` caps the worker count without changing any
//! output.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::criticality::{
    descartes_counts, euler_lagrange_residual, r_identity_residual, r_polynomial,
    PolynomialCoeffs,
};
use crate::equilibrium::{equilibrium_measure, numeric_moment};
use crate::observables::{dissipation_empirical, sigma_v_empirical, ConvergenceSeries};
use crate::particle::{parse_initial, record, step, NoiseMode, ParticleState, SimConfig, SimError};
use crate::potential::QuarticPotential;
use crate::quad::linspace;
use crate::singular::{enumerate_stationary_onecut, obstruction_min_on_k};

/// Success.
pub const EXIT_OK: i32 = 0;
/// At least one selftest check failed.
pub const EXIT_SELFTEST: i32 = 1;
/// Bad flags or an unusable input/output path.
pub const EXIT_USAGE: i32 = 2;
/// The simulation itself failed (stiff configuration, collision).
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Parser)]
#[command(
    name = "freefp",
    version,
    about = "Equilibrium measures and particle dynamics for the quartic ensemble"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write the equilibrium measure (support, parameters, sampled density) as JSON.
    Equilibrium {
        /// Quadratic coupling of the potential.
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        /// Density sample points per support interval (at least 16).
        #[arg(long, default_value_t = 256)]
        grid: usize,
        /// Output path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate stationary one-interval measures as a JSON list.
    Stationary {
        /// Quadratic coupling of the potential.
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        /// Residual tolerance for accepting an endpoint pair. The default is
        /// loose enough that a coupling given to ~7 significant digits keeps
        /// the candidates it has in exact arithmetic.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Output path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report critical-measure diagnostics of the equilibrium measure as JSON.
    Critical {
        /// Quadratic coupling of the potential.
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        /// Output path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the particle system and write the final positions, one per line.
    Simulate {
        #[command(flatten)]
        sim: SimFlags,
        /// Output path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the particle system and write the observable time series as CSV.
    Converge {
        #[command(flatten)]
        sim: SimFlags,
        /// Record observables every this many base steps.
        #[arg(long, default_value_t = 1)]
        every: usize,
        /// Extra Wasserstein order for the `wp` column (in [1, 8]).
        #[arg(long)]
        p: Option<f64>,
        /// Output path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in invariant checks and print a pass/fail table.
    Selftest {
        /// Run the fast subset only.
        #[arg(long)]
        quick: bool,
    },
}

/// Flags shared by `simulate` and `converge`.
#[derive(Args)]
struct SimFlags {
    /// Quadratic coupling of the potential.
    #[arg(long, allow_negative_numbers = true)]
    c: f64,
    /// Particle count.
    #[arg(long)]
    n: usize,
    /// Base time step, in (0, 0.1].
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    /// Final time.
    #[arg(long = "t-final", default_value_t = 1.0)]
    t_final: f64,
    /// Seed for the noise stream and random initial conditions.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Initial condition: `uniform:LO,HI` | `equilibrium` | `twopoint:X1,X2,W` | `file:PATH`.
    #[arg(long, default_value = "equilibrium")]
    init: String,
    /// Noise mode: `vanishing` or `none`.
    #[arg(long, default_value = "vanishing")]
    noise: String,
}

/// Parses `argv` and runs the selected subcommand, returning the process exit
/// code. The binary is a one-liner over this, which keeps the whole driver
/// testable in-process.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version reach stdout and succeed; real parse errors go
            // to stderr and are usage errors.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match cli.cmd {
        Cmd::Equilibrium { c, grid, out } => cmd_equilibrium(c, grid, out.as_deref()),
        Cmd::Stationary { c, tol, out } => cmd_stationary(c, tol, out.as_deref()),
        Cmd::Critical { c, out } => cmd_critical(c, out.as_deref()),
        Cmd::Simulate { sim, out } => cmd_simulate(&sim, out.as_deref()),
        Cmd::Converge { sim, every, p, out } => cmd_converge(&sim, every, p, out.as_deref()),
        Cmd::Selftest { quick } => cmd_selftest(quick),
    }
}

/// Writes `bytes` to `path` via a staged sibling file and an atomic rename,
/// so no reader ever observes a partial file.
fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let mut staged_name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name"))?
        .to_os_string();
    staged_name.push(".tmp");
    let staged = path.with_file_name(staged_name);
    fs::write(&staged, bytes)?;
    fs::rename(&staged, path)
}

/// Sends `content` to `out` (atomically) or to stdout, mapping write failures
/// to the usage exit code.
fn emit(out: Option<&Path>, content: &str) -> i32 {
    match out {
        Some(path) => match write_atomic(path, content.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                EXIT_USAGE
            }
        },
        None => {
            print!("{content}");
            EXIT_OK
        }
    }
}

fn usage_error(msg: &str) -> i32 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn json_line(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

fn cmd_equilibrium(c: f64, grid: usize, out: Option<&Path>) -> i32 {
    if !c.is_finite() {
        return usage_error("--c must be finite");
    }
    if grid < 16 {
        return usage_error(&format!("--grid must be at least 16, got {grid}"));
    }
    let m = equilibrium_measure(c);
    let mut nodes = Vec::new();
    for &(lo, hi) in m.support() {
        nodes.extend(linspace(lo, hi, grid));
    }
    let density: Vec<f64> = nodes.iter().map(|&x| m.density(x)).collect();
    let mut value = m.to_json_value();
    let obj = value.as_object_mut().expect("descriptor JSON is an object");
    obj.insert("c".into(), serde_json::json!(c));
    obj.insert("nodes".into(), serde_json::json!(nodes));
    obj.insert("density".into(), serde_json::json!(density));
    emit(out, &json_line(&value))
}

fn cmd_stationary(c: f64, tol: f64, out: Option<&Path>) -> i32 {
    if !c.is_finite() {
        return usage_error("--c must be finite");
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return usage_error(&format!("--tol must be positive, got {tol}"));
    }
    let candidates = enumerate_stationary_onecut(c, tol);
    let value = serde_json::to_value(&candidates).expect("candidates serialize");
    emit(out, &json_line(&value))
}

/// Sample points for the off-axis identity residual, chosen away from every
/// admissible support.
const IDENTITY_SAMPLES: [Complex64; 3] = [
    Complex64::new(0.0, 2.0),
    Complex64::new(1.0, 1.0),
    Complex64::new(-3.0, 0.5),
];

fn cmd_critical(c: f64, out: Option<&Path>) -> i32 {
    if !c.is_finite() {
        return usage_error("--c must be finite");
    }
    let m = equilibrium_measure(c);
    let m1 = numeric_moment(&m, 1);
    let m2 = numeric_moment(&m, 2);
    let r = r_polynomial(c, m1, m2);
    let (pos_bound, neg_bound) = match descartes_counts(&r) {
        Ok(counts) => counts,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_RUNTIME;
        }
    };
    let el = euler_lagrange_residual(&m, &QuarticPotential::new(c), 512);
    let rid = match r_identity_residual(&m, c, &IDENTITY_SAMPLES) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_RUNTIME;
        }
    };
    let value = serde_json::json!({
        "c": c,
        "m1": m1,
        "m2": m2,
        "r_coeffs": r.coeffs(),
        "descartes": { "positive_bound": pos_bound, "negative_bound": neg_bound },
        "el_residual": el,
        "r_identity_residual": rid,
        "samples": IDENTITY_SAMPLES.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
    });
    emit(out, &json_line(&value))
}

/// Validates the shared simulation flags into a `SimConfig`, with the extra
/// `converge`-only knobs folded in.
fn build_config(sf: &SimFlags, every: usize, p: Option<f64>) -> Result<SimConfig, String> {
    if !sf.c.is_finite() {
        return Err("--c must be finite".into());
    }
    if sf.n < 1 {
        return Err("--n must be at least 1".into());
    }
    if !(sf.dt > 0.0 && sf.dt <= 0.1) {
        return Err(format!("--dt must lie in (0, 0.1], got {}", sf.dt));
    }
    if !(sf.t_final > 0.0 && sf.t_final.is_finite()) {
        return Err(format!("--t-final must be positive, got {}", sf.t_final));
    }
    if every < 1 {
        return Err("--every must be at least 1".into());
    }
    if let Some(p) = p {
        if !(1.0..=8.0).contains(&p) {
            return Err(format!("--p must lie in [1, 8], got {p}"));
        }
    }
    let noise_mode = match sf.noise.as_str() {
        "vanishing" => NoiseMode::Vanishing,
        "none" => NoiseMode::None,
        other => return Err(format!("--noise must be `vanishing` or `none`, got `{other}`")),
    };
    let mut cfg = SimConfig::new(sf.c, sf.n, sf.dt, sf.t_final, sf.seed);
    cfg.noise_mode = noise_mode;
    cfg.record_every = every;
    cfg.wp_order = p;
    Ok(cfg)
}

/// Initial-condition problems are usage errors; failures while integrating
/// are runtime errors.
fn setup_state(cfg: &SimConfig, init_spec: &str) -> Result<ParticleState, i32> {
    let init = match parse_initial(init_spec, cfg.n, cfg.seed, cfg.c) {
        Ok(xs) => xs,
        Err(e) => {
            eprintln!("error: {e}");
            return Err(EXIT_USAGE);
        }
    };
    ParticleState::new(init, cfg.seed).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_RUNTIME
    })
}

fn base_step_count(cfg: &SimConfig) -> u64 {
    ((cfg.t_final / cfg.dt).round() as u64).max(1)
}

fn cmd_simulate(sf: &SimFlags, out: Option<&Path>) -> i32 {
    let cfg = match build_config(sf, 1, None) {
        Ok(cfg) => cfg,
        Err(msg) => return usage_error(&msg),
    };
    let mut state = match setup_state(&cfg, &sf.init) {
        Ok(s) => s,
        Err(code) => return code,
    };
    for _ in 0..base_step_count(&cfg) {
        if let Err(e) = step(&mut state, &cfg) {
            eprintln!("error: {e}");
            return EXIT_RUNTIME;
        }
    }
    let mut text = String::new();
    for x in state.positions() {
        writeln!(text, "{x:.16e}").expect("writing to a String cannot fail");
    }
    emit(out, &text)
}

fn cmd_converge(sf: &SimFlags, every: usize, p: Option<f64>, out: Option<&Path>) -> i32 {
    let cfg = match build_config(sf, every, p) {
        Ok(cfg) => cfg,
        Err(msg) => return usage_error(&msg),
    };
    let mut state = match setup_state(&cfg, &sf.init) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let reference = equilibrium_measure(cfg.c);
    let quants = reference.quantile_grid(cfg.n);
    let mut series = ConvergenceSeries::new();
    record(&mut series, &state, &cfg, &quants);
    // Drive the steps here rather than through `simulate` so that a stiffness
    // abort still leaves the partial series in hand.
    let n_steps = base_step_count(&cfg);
    let mut abort: Option<SimError> = None;
    for k in 1..=n_steps {
        if let Err(e) = step(&mut state, &cfg) {
            abort = Some(e);
            break;
        }
        if k % cfg.record_every as u64 == 0 || k == n_steps {
            record(&mut series, &state, &cfg, &quants);
        }
    }
    let mut csv = series.to_csv();
    let run_code = match &abort {
        Some(e) => {
            writeln!(csv, "# aborted: {e}").expect("writing to a String cannot fail");
            EXIT_RUNTIME
        }
        None => EXIT_OK,
    };
    match emit(out, &csv) {
        EXIT_OK => run_code,
        write_code => write_code,
    }
}

// ---------------------------------------------------------------------------
// Selftest
// ---------------------------------------------------------------------------

struct CheckOutcome {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn check(name: &'static str, result: Result<String, String>) -> CheckOutcome {
    match result {
        Ok(detail) => CheckOutcome { name, passed: true, detail },
        Err(detail) => CheckOutcome { name, passed: false, detail },
    }
}

/// Normalization of the equilibrium density across both support regimes.
fn check_normalization() -> Result<String, String> {
    let mut worst: (f64, f64) = (0.0, f64::NAN);
    for c in [-3.0, -2.0, -1.0, 0.0, 1.0, 5.0] {
        let err = (numeric_moment(&equilibrium_measure(c), 0) - 1.0).abs();
        if err > worst.0 {
            worst = (err, c);
        }
    }
    if worst.0 <= 1e-10 {
        Ok(format!("max |mass - 1| = {:.2e}", worst.0))
    } else {
        Err(format!("|mass - 1| = {:.2e} at c = {}", worst.0, worst.1))
    }
}

/// The equilibrium measure satisfies its first-order optimality condition.
fn check_euler_lagrange() -> Result<String, String> {
    let mut worst: (f64, f64) = (0.0, f64::NAN);
    for c in [-3.0, -2.0, -1.0, 0.0, 1.0] {
        let m = equilibrium_measure(c);
        let res = euler_lagrange_residual(&m, &QuarticPotential::new(c), 512);
        if res > worst.0 {
            worst = (res, c);
        }
    }
    if worst.0 <= 1e-3 {
        Ok(format!("max residual = {:.2e} on 512 nodes", worst.0))
    } else {
        Err(format!("residual = {:.2e} at c = {}", worst.0, worst.1))
    }
}

/// The obstruction quartic stays positive on its wedge and attains the known
/// minimum at the known corner.
fn check_obstruction(grid: usize) -> Result<String, String> {
    let (min, (x, c)) = obstruction_min_on_k(-2.0, 0.0, grid);
    let target = 9680.0 / 9.0;
    if min <= 0.0 {
        return Err(format!("minimum {min:.6} is not positive (at x = {x:.6}, c = {c:.6})"));
    }
    if (min - target).abs() > 1e-6 || (x - 10.0 / 3.0).abs() > 1e-4 || (c + 2.0).abs() > 1e-6 {
        return Err(format!(
            "minimum {min:.9} at ({x:.6}, {c:.6}); expected {target:.9} at (10/3, -2)"
        ));
    }
    Ok(format!("min f = {min:.6} > 0 at ({x:.6}, {c:.6})"))
}

/// Expands `prod (x - r_i)` into ascending coefficients.
fn poly_from_roots(roots: &[f64]) -> PolynomialCoeffs {
    let mut coeffs = vec![1.0];
    for &r in roots {
        coeffs.push(0.0);
        for k in (0..coeffs.len() - 1).rev() {
            let lower = coeffs[k];
            coeffs[k + 1] += lower;
            coeffs[k] = -r * lower;
        }
        // The shift above multiplies by (x - r) in place: each existing
        // coefficient contributes to one degree up and scales by -r where it
        // stands.
    }
    PolynomialCoeffs::new(coeffs)
}

/// Descartes' rule on fixed references and `count` randomized polynomials
/// with known integer roots: the sign-change count must bound the positive
/// (resp. negative) root count and match its parity.
fn check_descartes(count: usize) -> Result<String, String> {
    use rand::Rng;
    use rand::SeedableRng;

    // (x - 1)(x - 2)(x + 3): two positive roots, one negative.
    let reference = poly_from_roots(&[1.0, 2.0, -3.0]);
    let (p, q) = descartes_counts(&reference).map_err(|e| e.to_string())?;
    if p != 2 || q != 1 {
        return Err(format!("reference cubic gave bounds ({p}, {q}), expected (2, 1)"));
    }

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..count {
        let deg = rng.gen_range(1..=6);
        let roots: Vec<f64> = (0..deg)
            .map(|_| {
                // Nonzero integer roots keep the coefficient arithmetic exact.
                let mag = rng.gen_range(1..=4) as f64;
                if rng.gen_bool(0.5) {
                    mag
                } else {
                    -mag
                }
            })
            .collect();
        let poly = poly_from_roots(&roots);
        let (p, q) = descartes_counts(&poly).map_err(|e| e.to_string())?;
        let pos = roots.iter().filter(|&&r| r > 0.0).count();
        let neg = roots.iter().filter(|&&r| r < 0.0).count();
        if pos > p || (p - pos) % 2 != 0 || neg > q || (q - neg) % 2 != 0 {
            return Err(format!(
                "trial {trial}: roots {roots:?} gave bounds ({p}, {q}) vs counts ({pos}, {neg})"
            ));
        }
    }
    Ok(format!("{count} randomized polynomials sound"))
}

/// One explicit step of size `h` matches the continuous energy-dissipation
/// identity to first order: the defect shrinks ~10x when `h` shrinks 10x.
fn check_dissipation_identity() -> Result<String, String> {
    let n = 64;
    let c = -1.0;
    let base: Vec<f64> = equilibrium_measure(c)
        .quantile_grid(n)
        .iter()
        .map(|x| 1.3 * x + 0.1)
        .collect();
    let defect = |h: f64| -> Result<f64, String> {
        let mut cfg = SimConfig::new(c, n, h, h, 7);
        cfg.noise_mode = NoiseMode::None;
        let mut state = ParticleState::new(base.clone(), 7).map_err(|e| e.to_string())?;
        let before = sigma_v_empirical(state.positions(), c).map_err(|e| e.to_string())?;
        let dissipation = dissipation_empirical(state.positions(), c).map_err(|e| e.to_string())?;
        step(&mut state, &cfg).map_err(|e| e.to_string())?;
        let after = sigma_v_empirical(state.positions(), c).map_err(|e| e.to_string())?;
        Ok(((after - before) / h + dissipation).abs())
    };
    let coarse = defect(1e-3)?;
    let fine = defect(1e-4)?;
    let ratio = coarse / fine;
    if (5.0..=20.0).contains(&ratio) {
        Ok(format!("defect ratio {ratio:.2} for h = 1e-3 vs 1e-4"))
    } else {
        Err(format!(
            "defect ratio {ratio:.2} outside [5, 20] (coarse {coarse:.3e}, fine {fine:.3e})"
        ))
    }
}

fn cmd_selftest(quick: bool) -> i32 {
    let mut outcomes = vec![check("normalization", check_normalization())];
    if !quick {
        outcomes.push(check("euler_lagrange", check_euler_lagrange()));
    }
    outcomes.push(check(
        "obstruction_minimum",
        check_obstruction(if quick { 80 } else { 160 }),
    ));
    outcomes.push(check(
        "descartes",
        check_descartes(if quick { 40 } else { 200 }),
    ));
    outcomes.push(check("dissipation_identity", check_dissipation_identity()));

    let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
    let mut all_passed = true;
    for o in &outcomes {
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("{:width$}  {}  {}", o.name, verdict, o.detail);
        all_passed &= o.passed;
    }
    if all_passed {
        EXIT_OK
    } else {
        println!("selftest: FAIL");
        EXIT_SELFTEST
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> i32 {
        run(std::iter::once("freefp").chain(args.iter().copied()))
    }

    #[test]
    fn equilibrium_json_has_the_expected_shape() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("eq.json");
        let code = run_args(&[
            "equilibrium",
            "--c",
            "0",
            "--grid",
            "32",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(v["kind"], "one_cut");
        assert_eq!(v["c"], 0.0);
        let nodes = v["nodes"].as_array().unwrap();
        let density = v["density"].as_array().unwrap();
        assert_eq!(nodes.len(), 32);
        assert_eq!(density.len(), 32);
        let support = v["support"].as_array().unwrap();
        assert_eq!(support.len(), 1);
        let edge = support[0][1].as_f64().unwrap();
        assert!((edge - 1.519_671_371_303_185_3).abs() < 1e-12);
    }

    #[test]
    fn two_cut_profile_gets_nodes_in_both_intervals() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("eq.json");
        let code = run_args(&[
            "equilibrium",
            "--c",
            "-3",
            "--grid",
            "16",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(v["kind"], "two_cut");
        assert_eq!(v["nodes"].as_array().unwrap().len(), 32);
        assert_eq!(v["support"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn bad_flags_are_usage_errors() {
        assert_eq!(run_args(&["equilibrium", "--c", "abc"]), EXIT_USAGE);
        assert_eq!(run_args(&["equilibrium", "--c", "0", "--grid", "4"]), EXIT_USAGE);
        assert_eq!(run_args(&["stationary", "--c", "0", "--tol", "-1"]), EXIT_USAGE);
        assert_eq!(run_args(&["nonsense"]), EXIT_USAGE);
        assert_eq!(
            run_args(&["converge", "--c", "0", "--n", "8", "--noise", "loud"]),
            EXIT_USAGE
        );
        assert_eq!(
            run_args(&["converge", "--c", "0", "--n", "8", "--dt", "0.5"]),
            EXIT_USAGE
        );
    }

    #[test]
    fn unwritable_out_path_is_a_usage_error() {
        assert_eq!(
            run_args(&[
                "equilibrium",
                "--c",
                "0",
                "--out",
                "/nonexistent-dir/eq.json"
            ]),
            EXIT_USAGE
        );
    }

    #[test]
    fn stationary_counts_match_the_census() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("st.json");
        for (c, expected) in [("0", 1usize), ("-2.5", 0)] {
            let code = run_args(&["stationary", "--c", c, "--out", out.to_str().unwrap()]);
            assert_eq!(code, EXIT_OK);
            let v: serde_json::Value =
                serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
            assert_eq!(v.as_array().unwrap().len(), expected, "c = {c}");
        }
    }

    #[test]
    fn converge_writes_a_parseable_series() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("series.csv");
        let code = run_args(&[
            "converge",
            "--c",
            "0",
            "--n",
            "16",
            "--dt",
            "0.01",
            "--t-final",
            "0.1",
            "--seed",
            "5",
            "--init",
            "uniform:-1,1",
            "--noise",
            "none",
            "--every",
            "2",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_OK);
        let text = std::fs::read_to_string(&out).unwrap();
        let series = ConvergenceSeries::from_csv(&text).unwrap();
        assert_eq!(series.rows().len(), 6);
    }

    #[test]
    fn stiff_converge_leaves_a_partial_series_and_exit_3() {
        let dir = tempfile::tempdir().unwrap();
        let init = dir.path().join("init.txt");
        std::fs::write(&init, "-1e40\n1e40\n").unwrap();
        let out = dir.path().join("series.csv");
        let code = run_args(&[
            "converge",
            "--c",
            "0",
            "--n",
            "2",
            "--noise",
            "none",
            "--init",
            &format!("file:{}", init.display()),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_RUNTIME);
        let text = std::fs::read_to_string(&out).unwrap();
        let trailer = text.lines().last().unwrap();
        assert!(
            trailer.starts_with("# aborted: substep depth exceeded"),
            "unexpected trailer: {trailer}"
        );
        // The partial series (just the initial row) still parses.
        let series = ConvergenceSeries::from_csv(&text).unwrap();
        assert_eq!(series.rows().len(), 1);
    }

    #[test]
    fn selftest_quick_passes() {
        assert_eq!(run_args(&["selftest", "--quick"]), EXIT_OK);
    }

    #[test]
    fn poly_from_roots_expands_correctly() {
        // (x - 1)(x + 2) = x^2 + x - 2.
        let p = poly_from_roots(&[1.0, -2.0]);
        assert_eq!(p.coeffs(), &[-2.0, 1.0, 1.0]);
    }
}
