//! Exact active ranking from noisy pairwise and listwise comparisons.
//!
//! The pairwise stack is layered: [`ranking::atc`] compares two items with a
//! guessed gap, [`ranking::ati`] inserts an item into a sorted list by a
//! counter-augmented random walk on a [`pit::Pit`], [`ranking::iai`] retries
//! insertion with halving gap guesses, and [`ranking::iir`] ranks `1..=n` by
//! repeated insertion. [`listwise`] holds the m-wise merge sort, and
//! [`harness`] runs seeded Monte-Carlo sweeps over generated instances.

pub mod error;
pub mod harness;
pub mod instance;
pub mod listwise;
pub mod pit;
pub mod ranking;

pub use error::{Error, Result};
pub use instance::{ComparisonOracle, Instance, InstanceOracle};
