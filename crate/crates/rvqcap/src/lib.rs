//! Limited-feedback MIMO precoding with random vector quantization (RVQ).
//!
//! A transmitter with `n_t` antennas sends `k` data streams through an
//! `n_r x n_t` i.i.d. Rayleigh-fading channel using a semi-unitary precoding
//! matrix. The receiver knows the channel, picks the best precoder out of a
//! shared codebook of `2^b` random entries, and feeds the index back. This
//! crate provides both sides of the story:
//!
//! * exact finite-system machinery — seeded channel/codebook sampling,
//!   exhaustive codebook selection, optimal and linear (MF/MMSE) receiver
//!   rates, water-filling ([`randmat`], [`quantizer`], [`receivers`]);
//! * large-system limits — the beamforming rate-gap laws, Marchenko–Pastur
//!   quadrature, closed-form capacities with and without feedback, rank
//!   optimization, and the Gaussian rate approximation for rank-`k`
//!   precoding ([`asymptotics`]);
//! * an experiment harness that sweeps the standard figure presets, runs
//!   seeded parallel Monte Carlo, and compares simulation against the
//!   asymptotic curves ([`harness`]).
//!
//! All rates are handled in nats internally; conversion to bits happens only
//! at the output layer. Everything is deterministic given a master seed:
//! per-trial generators are derived with a counter-based scheme, so results
//! do not depend on thread count or execution order.
//!
//! The `examples/` directory has one runnable example per capability; start
//! with `beamforming_rate_gap` or `linear_receivers`.

pub mod asymptotics;
mod error;
pub mod harness;
pub mod numeric;
pub mod quantizer;
pub mod randmat;
pub mod receivers;
pub mod stats;

pub use error::{Error, Result};

/// Natural-log to base-2 conversion factor, `1/ln 2`.
pub const NATS_TO_BITS: f64 = std::f64::consts::LOG2_E;

/// Convert a decibel SNR to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert a linear SNR to decibels.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}
