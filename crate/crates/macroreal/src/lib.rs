//! Quantum-mechanical predictions for an oscillating two-level system under
//! sharp and unsharp measurements, tested against three macrorealism
//! criteria: Wigner-form Leggett-Garg inequalities (WLGI), standard n-term
//! Leggett-Garg inequalities (LGI), and no-signalling in time (NSIT).
//!
//! The crate is organised as a pipeline of small pure modules:
//!
//! * [`qm`] — exact complex 2×2 algebra: states, the oscillation unitary,
//!   projective and unsharp effect operators, and the Lüders update rule.
//! * [`sequences`] — single-time, joint, and correlation statistics for
//!   equally spaced sequential measurements.
//! * [`inequalities`] — the macrorealism criteria as data (signed
//!   combinations of event probabilities with classical bounds) plus their
//!   evaluation at a parameter point.
//! * [`oracle`] — brute-force certification of every classical bound by
//!   enumerating deterministic outcome assignments in exact integer
//!   arithmetic.
//! * [`optimize`] — violation maximisation over the state and evolution
//!   parameters, and critical-sharpness solving.
//! * [`montecarlo`] — seeded stochastic trajectory sampling that
//!   cross-validates the analytic engine.
//!
//! All types are immutable values and all operations are pure functions, so
//! everything here can be called from any number of threads without
//! synchronisation.

pub mod inequalities;
pub mod montecarlo;
pub mod optimize;
pub mod oracle;
pub mod qm;
pub mod sequences;

mod error;

pub use error::{Error, Result};
