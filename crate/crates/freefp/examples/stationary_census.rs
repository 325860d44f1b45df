//! Census of stationary one-interval measures as the coupling varies.
//!
//! For c ≥ −2 the census finds exactly the equilibrium measure. For
//! −√15 < c < −2 there is no one-interval stationary measure at all, and at
//! c = −√15 a mirror-symmetric pair of off-center intervals appears.
//!
//! Run: `cargo run --release --example stationary_census`

use freefp::singular::{enumerate_stationary_onecut, DEFAULT_TOL};

fn main() {
    let couplings = [
        2.0,
        1.0,
        0.0,
        -1.0,
        -2.0,
        -2.5,
        -3.0,
        -15.0_f64.sqrt(),
        -4.0,
    ];
    for c in couplings {
        let found = enumerate_stationary_onecut(c, DEFAULT_TOL);
        println!("c = {c:+.6}: {} candidate(s)", found.len());
        for cand in &found {
            println!(
                "    [{:+.9}, {:+.9}]  case = {:?}  admissible = {}",
                cand.a, cand.b, cand.case_tag, cand.admissible
            );
        }
    }

    // The off-center pair sits exactly at c = -sqrt(15); its edges have the
    // closed form [t, 5t] and [-5t, -t] with t = 15^(-1/4).
    let t = 15.0_f64.powf(-0.25);
    println!();
    println!("closed-form edges at c = -sqrt(15): t = {t:.12}");
    println!("    right interval [{:+.12}, {:+.12}]", t, 5.0 * t);
    println!("    left  interval [{:+.12}, {:+.12}]", -5.0 * t, -t);
}
