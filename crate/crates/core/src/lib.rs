//! Optimistic index policies for stochastic multi-armed bandits.
//!
//! Every policy in this crate is the same rule: pull each arm once, then pull
//! the arm maximizing `estimate + radius (+ perturbation)`. What changes between
//! UCB, UCB-V, linear UCB, finite-arm GP-UCB and the heavy-tailed variants is
//! only the estimator behind `estimate` and the formula behind `radius`.
//!
//! The [`verify`] module replays every trace from raw rewards and checks the
//! deterministic facts the regret analysis rests on:
//!
//! - the good event (every estimate inside its radius at every pull count),
//! - radius collapse below a quarter of the gap after `m0` pulls,
//! - the "optimism forces a deviation" implication for every late visit to a
//!   suboptimal arm,
//! - the pull bound `N_i(T) <= m0` on the good event.
//!
//! [`harness`] wraps this into seeded, reproducible experiments with CSV traces
//! and JSON reports. See the `examples/` directory for one runnable program per
//! capability.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod env;
pub mod error;
pub mod estimators;
pub mod harness;
pub mod policy;
pub mod radius;
pub mod rng;
pub mod verify;

pub use env::{ArmModel, EnvKind, Environment, GapProfile, KernelSpec};
pub use error::{Error, Result};
pub use estimators::{EstimatorBank, EstimatorSpec};
pub use policy::{BanditTrace, PerturbSpec, PolicySpec, PolicyState, StepRecord};
pub use radius::{CanonicalRadius, CollapseThreshold, RadiusSpec};
