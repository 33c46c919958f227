//! Statistically robust, distribution-oblivious multi-armed bandit policies.
//!
//! The crate provides:
//!
//! - [`distributions`]: arm reward models with sampling, analytic moments,
//!   closed-form KL divergences, and the bounded-support mean-shift
//!   perturbation that drives the lower-bound argument.
//! - [`scaling`]: slow-growing scaling functions `f(t)` and slow-decaying
//!   functions `g(t)` that parameterize the robust policies, with threshold
//!   inversion and prior-informed constructors.
//! - [`estimators`]: incremental mean estimators — running mean,
//!   monotone-truncated mean, and median-of-means with a round-dependent
//!   bin count.
//! - [`policies`]: the R-UCB, R-UCB-G and R-UCB-G-MoM arm-selection
//!   policies, plus a non-robust alpha-UCB baseline.
//! - [`bounds`]: evaluators for the theoretical regret upper bounds, their
//!   validity thresholds, and the classical logarithmic lower-bound curve.
//! - [`simulator`]: seeded, replicable Monte-Carlo regret experiments.
//!
//! All logarithms throughout the crate are natural logarithms.

pub mod bounds;
pub mod distributions;
pub mod error;
pub mod estimators;
pub mod policies;
pub mod scaling;
pub mod simulator;
mod textform;

pub use error::{Error, Result};
