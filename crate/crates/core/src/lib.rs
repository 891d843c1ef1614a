//! Multi-access coded caching.
//!
//! A server holds `N` files, `C` caches each store a `t/C` fraction of every
//! file, and each user reads a distinct set of `r` caches, so up to
//! `binom(C, r)` users share the link. This crate builds the placement, the
//! XOR multicast delivery and the per-user decoding for that scheme, computes
//! its exact rate, subpacketization and coding gain, evaluates the analytic
//! formulas of several cyclic multi-access baselines, and drives parameter
//! sweeps and golden checks for the `macc` command-line tool.

pub mod baselines;
pub mod combinatorics;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod rational;
pub mod scheme;

pub use combinatorics::{binom, enumerate_subsets, rank_subset, unrank_subset, BigCount, SubsetId};
pub use error::{Error, Result};
pub use metrics::{analyze, rate_memory_curve, RateMemoryPoint, SchemeReport};
pub use scheme::{
    build_placement, decode_user, generate_transmissions, simulate_end_to_end, CacheContent, DemandAssignment,
    DemandMode, SchemeParams, SubfileId, Transmission,
};
