//! Deterministic simulators and cost accounting for physical
//! matrix-multiplication machines.
//!
//! Three machine families are modelled, each with an itemized ledger of
//! model time and model energy:
//!
//! - [`flow`]: integer matrix multiplication by material flowing through
//!   calibrated splitter-tree networks, with certified noise thresholds
//!   under which rounding recovers the exact product.
//! - [`kinetic`]: Boolean matrix multiplication on a frictionless grid of
//!   unit masses swept by staggered agents, with slow row-clearing that
//!   costs less energy the more time it has.
//! - [`alpha`]: an abstract model of processes that trade speed for energy
//!   (`1/rate^alpha` per operation), with collision-checked schedules for
//!   list copying and matrix multiplication.
//!
//! [`gadgets`] holds the two warm-up aggregators (frictionless-track OR and
//! heat-diffusion averaging), [`scaling`] fits empirical exponents to
//! ledger totals across sweeps, and [`report`] renders runs as JSON or CSV.
//!
//! Everything is deterministic: randomness comes only from explicitly
//! seeded generators, so every run is reproducible bit-for-bit.
//!
//! See the `examples/` directory for a runnable tour of each capability,
//! and the `physim` binary for the command-line front end.

// `!(x > 0.0)`-style guards are used on purpose: unlike `x <= 0.0` they
// also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alpha;
pub mod cost;
pub mod error;
pub mod flow;
pub mod gadgets;
pub mod kinetic;
pub mod ledger;
pub mod matrix;
pub mod report;
pub mod scaling;

pub use error::{Error, Result};
pub use ledger::{CostLedger, LedgerEntry};
pub use matrix::{BinaryMatrix, BinaryVector, IntMatrix};

/// The seeded generator used throughout; fixed so identical seeds give
/// identical streams on every platform.
pub type SimRng = rand_chacha::ChaCha8Rng;

/// Convenience constructor for [`SimRng`].
pub fn seeded_rng(seed: u64) -> SimRng {
    use rand::SeedableRng;
    SimRng::seed_from_u64(seed)
}
