//! The obstruction quartic on its compact wedge.
//!
//! A one-interval stationary measure with an off-center support can only
//! exist where the quartic f(x, c) has a root with admissible geometry; on
//! the wedge K = {0 ≤ x ≤ −5c/3, −2 ≤ c ≤ 0} the quartic stays strictly
//! positive, which is what rules such measures out for small |c|.
//!
//! Run: `cargo run --release --example obstruction_landscape`

use freefp::singular::{obstruction_min_on_k, ObstructionPolynomial};

fn main() {
    // Coarse landscape: print the minimum of f along the x-section for a few
    // couplings.
    println!("section minima over x in [0, -5c/3]:");
    for i in 0..=8 {
        let c = -2.0 + 0.25 * i as f64;
        let poly = ObstructionPolynomial::new(c);
        let hi = -5.0 * c / 3.0;
        let mut min = f64::INFINITY;
        let mut argmin = 0.0;
        for j in 0..=400 {
            let x = hi * j as f64 / 400.0;
            let v = poly.eval(x);
            if v < min {
                min = v;
                argmin = x;
            }
        }
        println!("  c = {c:+.2}:  min f = {min:>14.6} at x = {argmin:.6}");
    }

    println!();
    let (min, (x, c)) = obstruction_min_on_k(-2.0, 0.0, 160);
    println!("refined global minimum on K: f = {min:.9} at (x, c) = ({x:.9}, {c:.9})");
    println!("exact value at the corner:   9680/9 = {:.9}", 9680.0 / 9.0);

    // The two boundary slices have closed forms, handy as spot checks.
    println!();
    println!("boundary slices:");
    for c in [-2.0, -1.0, -0.5] {
        let poly = ObstructionPolynomial::new(c);
        let left = poly.eval(0.0);
        let left_exact = 5.0 * (c * c - 20.0) * (c * c - 20.0);
        let right = poly.eval(-5.0 * c / 3.0);
        let right_exact = 80.0 / 9.0 * (c * c - 15.0) * (c * c - 15.0);
        println!(
            "  c = {c:+.2}:  f(0) = {left:.6} (exact {left_exact:.6}),  f(-5c/3) = {right:.6} (exact {right_exact:.6})"
        );
    }

    // Outside the wedge the quartic does vanish: at c = -sqrt(15) it has the
    // double root that lets the off-center stationary pair exist.
    let c = -15.0_f64.sqrt();
    let poly = ObstructionPolynomial::new(c);
    let roots = poly.roots_in(0.0, -5.0 * c / 3.0);
    println!();
    println!("at c = -sqrt(15) = {c:.9} the roots reappear: {roots:?}");
}
