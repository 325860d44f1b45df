//! Equilibrium measures and interacting-particle dynamics for the quartic
//! confining potential `V(x) = x^4/4 + (c/2) x^2`.
//!
//! The library has three layers:
//!
//! * **Analytic layer** — [`potential`] (the potential and its gradient),
//!   [`equilibrium`] (closed-form minimizing measures, CDFs, quantiles,
//!   moments, sampling) and [`singular`] (the census of stationary one-interval
//!   measures via the endpoint equations, the obstruction quartic, and a
//!   Chebyshev inversion of the finite-interval singular integral equation).
//! * **Diagnostic layer** — [`criticality`] (Stieltjes transforms, principal
//!   value Hilbert transforms, Euler–Lagrange residuals, the spectral
//!   polynomial and Descartes root-sign counts) and [`observables`] (free
//!   energy, dissipation, Wasserstein distances, convergence time series).
//! * **Dynamic layer** — [`particle`] (the N-particle gradient-flow /
//!   Dyson-type integrator with gap-protecting adaptive substeps) and [`cli`]
//!   (the `freefp` command-line tool wrapping everything above).
//!
//! Every major capability has a runnable example:
//!
//! | example | shows |
//! |---|---|
//! | `equilibrium_profile` | density/CDF profiles across the one-cut→two-cut transition |
//! | `stationary_census` | enumerating stationary one-interval measures vs. the coupling |
//! | `obstruction_landscape` | the obstruction quartic on its compact rectangle |
//! | `singular_inversion` | Chebyshev solution of the singular integral equation |
//! | `critical_polynomial` | spectral polynomial, Descartes counts, identity residuals |
//! | `relax_to_equilibrium` | particle gas relaxing from a uniform blob, CSV series |
//! | `equilibrium_stationarity` | quantile-start run staying put |
//! | `free_entropy_dissipation` | the energy/dissipation bookkeeping identity |
//!
//! Run one with `cargo run --release --example relax_to_equilibrium`.
//!
//! Determinism is a design contract throughout: fixed seeds give bitwise
//! identical output, independently of the `FREEFP_THREADS` worker count.

pub mod cli;
pub mod criticality;
pub mod equilibrium;
pub mod observables;
pub mod particle;
pub mod potential;
pub mod quad;
pub mod singular;
