//! Experiment harness, statistics and file formats around `mocoscale-core`.

pub mod harness;
pub mod persist;
pub mod report;
pub mod stats;

pub use mocoscale_core as core;
