//! qcert: certified bounds on linear observables of finite-dimensional
//! quantum states, combining finite-statistics confidence radii with
//! operational-distance bounds on measurement imperfection.
//!
//! The crate is organised as:
//!
//! - [`linalg`]: dense complex matrices, a Jacobi eigensolver, and the
//!   simplex / l1-ball / density projections the optimizer is built from.
//! - [`quantum`]: states, POVMs, observables and Kraus noise channels.
//! - [`stats`]: the Bretagnolle-Huber-Carol shot-noise radius and
//!   finite-shot measurement simulation.
//! - [`distance`]: the operational distance between POVMs, exactly and
//!   through several cheaper upper bounds.
//! - [`certifier`]: the confidence-region optimizer with a rigorous dual
//!   certificate for the reported bound.
//! - [`oracle`]: brute-force reference solvers for small instances, kept
//!   independent of the production code paths so tests can cross-check.

pub mod certifier;
pub mod distance;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod quantum;
pub mod stats;

pub use error::{Error, Result};
