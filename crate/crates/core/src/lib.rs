//! Core of `mocoscale`: Pareto dominance, the non-dominated archive, the four
//! combinatorial benchmark families, variation operators, the five
//! optimisers and exact bi-objective hypervolume.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, statistics
//! and experiment orchestration live in the `mocoscale` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algorithms;
pub mod archive;
pub mod error;
pub mod genotype;
pub mod indicators;
pub mod objective;
pub mod operators;
pub mod problems;
pub mod seed;
pub mod trajectory;

pub use archive::{Archive, Individual, InsertOutcome};
pub use error::{Error, Result};
pub use genotype::{Encoding, Genotype};
pub use objective::{dominates, non_dominated_filter, weakly_dominates, ObjectiveVector};
pub use problems::{generate_instance, Family, Move, ProblemInstance};
