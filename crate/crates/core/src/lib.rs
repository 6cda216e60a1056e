//! Benchmark toolkit for comparing word-sense disambiguation learners.
//!
//! Seven classifiers (naive Bayes, perceptron, a C4.5-style decision tree,
//! 3-nearest-neighbor, and the PFOIL rule learners DNF/CNF/decision-list)
//! share one sparse binary stem representation and one experimental
//! harness: balanced corpora, seeded train/test splits, learning curves
//! over nested training subsets, per-cell CPU timing, model-size
//! accounting, and paired t-tests between classifiers.
//!
//! Everything downstream of a master seed is deterministic; see [`rng`]
//! for the stream-derivation rule.

pub mod classifier;
pub mod dataset;
pub mod error;
pub mod harness;
pub mod knn;
pub mod linear;
pub mod rng;
pub mod stats;
pub mod symbolic;
pub mod synth;
pub mod timing;

pub use error::{Error, Result};
