//! Distributed fuzzy-logic resource and power allocation for OFDMA femto-cell
//! networks.
//!
//! Every femto base station scores its resource blocks from locally observed
//! quantities (required rate, desired signal, per-RB interference and fading)
//! with a Mamdani fuzzy system, picks the most allocatable blocks and a
//! half/full transmit power for each, and optionally adapts its MCS from the
//! averaged SINR. The crate also carries the reference policies (maximum
//! power, random almost-blank subframes, greedy SINR, exhaustive optimum), an
//! analytical received-signal statistics pipeline, and a seeded Monte Carlo
//! harness.

pub mod benchmarks;
pub mod channel;
pub mod error;
pub mod fuzzy;
pub mod harness;
pub mod icic;
pub mod link_metrics;
pub mod optimality;
pub mod rng;
pub mod scenario;
pub mod signal_stats;
pub mod units;

pub use error::{Error, Result};
