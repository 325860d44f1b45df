//! Bounded solution of the dominant singular integral equation on an
//! interval by Chebyshev expansion.
//!
//! The solver inverts  PV ∫ φ(y)/(y − x) dy = f(x)  for the unique solution
//! that vanishes at both endpoints, subject to the orthogonality condition on
//! f. Two checks: a right-hand side with a known closed-form solution, and
//! the quartic-potential right-hand side whose solution must be the
//! equilibrium density itself.
//!
//! Run: `cargo run --release --example singular_inversion`

use freefp::equilibrium::equilibrium_measure;
use freefp::singular::muskhelishvili_solve;

fn main() {
    // f(t) = t on [-1, 1] has the bounded solution φ(x) = -sqrt(1 - x²)/π.
    let grid = muskhelishvili_solve(-1.0, 1.0, &|t: f64| t, 64).expect("f = t is orthogonal");
    let mut worst = 0.0f64;
    for (&x, &v) in grid.nodes.iter().zip(&grid.values) {
        let exact = -(1.0 - x * x).sqrt() / std::f64::consts::PI;
        worst = worst.max((v - exact).abs());
    }
    println!("f(t) = t on [-1, 1]:");
    println!("  max |φ - closed form| = {worst:.3e}");
    println!("  mass of φ            = {:+.12} (exact -0.5)", grid.mass());

    // The equilibrium density solves the singular equation with the
    // right-hand side −½V′: the kernel here is ∫φ(y)/(y−x) dy, the negative
    // of the Hilbert-transform orientation in the stationarity condition.
    println!();
    for c in [0.0, 1.0, -1.5] {
        let m = equilibrium_measure(c);
        let (a, b) = m.support()[0];
        let rhs = move |x: f64| -0.5 * (x * x * x + c * x);
        let grid = muskhelishvili_solve(a, b, &rhs, 128).expect("equilibrium rhs is orthogonal");
        let mut worst = 0.0f64;
        for (&x, &v) in grid.nodes.iter().zip(&grid.values) {
            worst = worst.max((v - m.density(x)).abs());
        }
        println!("c = {c:+.2}: support [{a:+.6}, {b:+.6}]");
        println!("  max |φ - equilibrium density| = {worst:.3e}");
        println!("  mass of φ                     = {:.12}", grid.mass());
    }

    // A constant right-hand side violates the orthogonality condition, so
    // no bounded solution exists and the solver reports it.
    println!();
    match muskhelishvili_solve(-1.0, 1.0, &|_t: f64| 1.0, 64) {
        Err(e) => println!("constant rhs correctly rejected: {e}"),
        Ok(_) => println!("constant rhs unexpectedly accepted"),
    }
}
