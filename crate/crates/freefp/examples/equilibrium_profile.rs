//! Density and CDF profiles of the equilibrium measure across the
//! one-cut → two-cut transition at c = −2.
//!
//! Run: `cargo run --release --example equilibrium_profile`

use freefp::equilibrium::equilibrium_measure;
use freefp::quad::linspace;

fn main() {
    println!("support edges across the transition:");
    for c in [1.0, 0.0, -1.0, -1.9, -2.0, -2.1, -3.0] {
        let m = equilibrium_measure(c);
        let support: Vec<String> = m
            .support()
            .iter()
            .map(|(lo, hi)| format!("[{lo:+.6}, {hi:+.6}]"))
            .collect();
        println!("  c = {c:+.2}  {:?}  {}", m.kind(), support.join(" ∪ "));
    }

    println!();
    println!("profile at c = 0 (single interval, quartic-deformed semicircle):");
    let m = equilibrium_measure(0.0);
    let (lo, hi) = m.support()[0];
    println!("  {:>10} {:>12} {:>12}", "x", "density", "cdf");
    for x in linspace(lo, hi, 13) {
        println!("  {x:>10.6} {:>12.6} {:>12.6}", m.density(x), m.cdf(x));
    }

    println!();
    println!("profile at c = -3 (two symmetric intervals):");
    let m = equilibrium_measure(-3.0);
    for &(lo, hi) in m.support() {
        println!("  interval [{lo:+.6}, {hi:+.6}]");
        for x in linspace(lo, hi, 5) {
            println!("  {x:>10.6} {:>12.6} {:>12.6}", m.density(x), m.cdf(x));
        }
    }

    println!();
    println!("moments at c = 0: m2 = {:.12}, m4 = {:.12}", m2(0.0), m4(0.0));
}

fn m2(c: f64) -> f64 {
    equilibrium_measure(c).moment(2)
}

fn m4(c: f64) -> f64 {
    equilibrium_measure(c).moment(4)
}
