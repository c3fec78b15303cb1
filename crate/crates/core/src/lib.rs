//! Subgraph counting under edge local differential privacy.
//!
//! Every user holds one row of the adjacency matrix (its neighbor list) and
//! runs a randomizer locally; a collector only ever sees released messages.
//! The crate simulates that protocol for three families of estimators:
//!
//! - k-star counts through per-user Laplace noise ([`estimators::local_lap_kstar`]),
//! - triangle counts from randomized response on the lower-triangular part
//!   of the adjacency matrix, debiased by empirical estimation
//!   ([`estimators::local_rr_triangle`]),
//! - triangle counts with a second interaction round in which users count
//!   noisy triangles against the published noisy graph
//!   ([`estimators::local_2rounds_triangle`]),
//!
//! together with centralized Laplace baselines, a private max-degree
//! sub-protocol, and a reproducible Monte Carlo harness.
//!
//! This is a research simulator. The Laplace sampler is not hardened against
//! floating-point side channels.

pub mod cli;
pub mod error;
pub mod estimators;
pub mod graph;
pub mod harness;
pub mod mech;

pub use error::{Error, Result};
