//! Effective secure capacity of a cognitive-radio wiretap channel.
//!
//! A secondary transmitter senses the primary users' channel, picks a
//! transmit power per detection outcome, and serves a queue whose
//! quality-of-service exponent `theta` prices buffer overflows. Secrecy
//! against a fading eavesdropper is enforced per frame through the rate
//! policy, and the powers obey a sensing-weighted average interference
//! budget. The crate computes the maximum constant arrival rate such a
//! link supports — the effective secure capacity — and validates the
//! number end to end:
//!
//! - [`params`]: exogenous scalars, derived constants, and the four
//!   sensing scenarios with their probabilities.
//! - [`fading`]: seeded joint draws of the two channel power gains.
//! - [`rates`]: per-frame secrecy rates and scenario outcomes.
//! - [`solver`]: optimal branch powers per draw (a safeguarded fixed
//!   point), calibration of the power price `gamma0` against the
//!   interference budget, and a derivative-free oracle.
//! - [`quadrature`]: Gauss-Laguerre rules for the deterministic
//!   estimator.
//! - [`capacity`]: Monte Carlo and quadrature capacity estimates,
//!   capacity maximization, and one-axis parameter sweeps.
//! - [`queue`]: frame-level queue simulation that checks the capacity's
//!   tail-decay meaning against an actual buffer.
//! - [`stats`]: least squares and a two-sample Kolmogorov-Smirnov test.
//! - [`report`]: byte-stable CSV tables and metadata sidecars.
//! - [`selftest`]: runtime verification suite behind the binary's
//!   `selftest` command.
//!
//! Every consumer of randomness takes an explicit seed and all parallel
//! reductions run in a fixed order, so equal configurations produce
//! byte-identical artifacts regardless of worker count.
//!
//! # Example
//!
//! ```
//! use effsec::capacity::maximize_capacity;
//! use effsec::params::SystemParams;
//! use effsec::solver::SolverConfig;
//!
//! let params = SystemParams { theta: 0.01, ..SystemParams::default() };
//! let result = maximize_capacity(&params, &SolverConfig::default(), 42, 2_000)?;
//! assert!(result.r_e > 0.0);
//! assert!(result.r_e <= result.ergodic_rate);
//! # Ok::<(), effsec::Error>(())
//! ```

// Validation guards are written `!(x > 0.0)` on purpose: the negated
// form is true for NaN, so non-numbers are rejected on the same path as
// out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capacity;
pub mod error;
pub mod fading;
pub mod params;
pub mod quadrature;
pub mod queue;
pub mod rates;
pub mod report;
pub mod selftest;
pub mod solver;
pub mod stats;

pub use error::{Error, Result};
