//! Adaptive layer sampling for multiplex networks.
//!
//! A multiplex network couples one node set through several edge layers.
//! Training an embedding for one layer benefits from information in *related*
//! layers, but aggregating all of them is wasteful when most are irrelevant.
//! This crate treats the choice of a neighboring layer as an adversarial
//! multi-armed bandit problem: each layer runs an exponential-weights learner
//! over its `L - 1` neighbors, observes an embedding-distance loss for the
//! one neighbor it sampled, and adapts its sampling distribution online.
//!
//! The bandit ([`bandit`]) is parameter-free: its learning rate is driven by
//! the running loss range and the cumulative variance of the importance
//! weighted loss estimates, so losses need not live in `[0, 1]`.
//!
//! The crate also ships the full evaluation harness:
//!
//! - [`regret`]: expected/realized regret against the best fixed arm in
//!   hindsight, plus an instance-dependent regret bound report.
//! - [`env`]: synthetic loss-generating adversaries (i.i.d., scaled,
//!   drifting) for exercising the bandit without any graph.
//! - [`graph`]: multiplex edge-list loading, synthetic similar-layer
//!   construction, and cross-validation edge splits.
//! - [`embed`]: a minimal per-layer link-prediction embedding model whose
//!   training loop feeds layer-distance losses back into one bandit per
//!   layer, with a uniform-sampling baseline.
//! - [`trace`]: per-round records and their CSV serialization.

pub mod bandit;
pub mod embed;
pub mod env;
pub mod error;
pub mod graph;
pub mod regret;
mod rng;
pub mod trace;

pub use bandit::{BanditState, EstLossVector, ProbDist};
pub use error::Error;
pub use trace::RoundTrace;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
