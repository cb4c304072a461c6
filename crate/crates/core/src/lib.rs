//! Achievable rates of layered probabilistic shaping for finite-alphabet
//! channels under arbitrary non-negative decoding metrics.
//!
//! The crate is `no_std` and only needs an allocator. All information
//! quantities are in bits. Everything here is a pure function of immutable
//! inputs; the random experiments ([`empirical`], [`simulator`]) derive one
//! ChaCha8 stream per trial from `(seed, trial index)`, so results do not
//! depend on how trials are scheduled.
//!
//! Module map:
//!
//! * [`alphabet`], [`pmf`], [`info`]: finite alphabets, distributions and the
//!   basic information measures.
//! * [`channel`]: discrete memoryless channels, posteriors, bit-level and
//!   interleaved (mixture) channels.
//! * [`metric`]: decoding metrics and their equivalence-preserving transforms.
//! * [`rates`]: closed-form rate expressions (uncertainty, `T_c`, `R_ps`, GMI,
//!   LM-rate, BMD, ICM, hard decision).
//! * [`typicality`]: letter-typical sets, exact counting and the encoding bound.
//! * [`empirical`]: per-sequence code rates and their Monte-Carlo estimate.
//! * [`simulator`]: the exhaustive random-coding experiment.

#![cfg_attr(not(test), no_std)]
// range checks are negated comparisons so that NaN fails them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod alphabet;
pub mod channel;
pub mod empirical;
mod error;
pub mod info;
pub mod math;
pub mod metric;
pub mod pmf;
pub mod rates;
pub mod rng;
pub mod simulator;
pub mod typicality;

pub use alphabet::Alphabet;
pub use channel::Dmc;
pub use error::{Error, Result};
pub use metric::{Metric, Quantizer};
pub use pmf::Pmf;

/// Tolerance used when validating that a probability vector sums to one.
pub const SUM_TOLERANCE: f64 = 1e-9;
