//! Stationary renewal chains with signed, heavy-tailed excursion rewards,
//! and the tools to study their moderate-deviation rates: exact measures,
//! samplers, path decompositions, tail oracles and certificates.

pub mod chain_sampler;
pub mod cli;
pub mod error;
pub mod numerics;
pub mod process_paths;
pub mod renewal_measure;
pub mod superposition;
pub mod tail_oracles;

pub use error::{Error, Result};
