//! # canoma-core
//!
//! Throughput and power-control analysis for a three-node half-duplex
//! cooperative NOMA downlink in which the strong user relays the weak
//! user's message (decode-and-forward), with an optional sub-symbol
//! timing mismatch deliberately inserted between the two superposed
//! streams in the broadcast phase.
//!
//! The timing mismatch `tau` (a fraction of the symbol interval) lets the
//! receivers oversample the broadcast signal, taking two correlated
//! samples per symbol. The resulting 2N-dimensional sampled model has a
//! tridiagonal Gram matrix whose off-diagonals alternate `1-tau`, `tau`.
//! Setting `tau = 0` recovers the conventional synchronous system.
//!
//! The crate is organised around two independent evaluation routes for
//! every throughput quantity:
//!
//! * [`matrix`] — the exact finite-frame sampled-matrix ("virtual MIMO")
//!   formulation, evaluated with banded symmetric factorizations. Slow
//!   but definitionally faithful; serves as the numerical ground truth.
//! * [`closed_form`] — closed-form finite-frame rates, their asymptotic
//!   limits as the frame length grows, upper/lower bound chains, the
//!   synchronous baselines, and the optimal-mismatch grid search.
//!
//! The two routes agree to ~1e-12 relative; the test suites enforce 1e-8.
//!
//! [`power`] builds on the closed forms to solve the weighted-sum
//! transmit-power minimization under per-message QoS (minimum rate)
//! constraints, via an exact three-case analysis, plus a brute-force
//! oracle and QoS verification helpers.
//!
//! All rates are in bits per channel use (base-2 logarithms). All powers
//! and channel gains are linear scale with unit-variance noise.
//!
//! Everything here is pure value math on `f64`: no interior mutability,
//! no global state. All types are `Copy` or cheaply clonable and safe to
//! share across threads.

pub mod closed_form;
mod error;
pub mod matrix;
pub mod model;
pub mod power;

pub use error::{Error, Result};
