//! Quadratic unconstrained binary optimization (QUBO) toolkit.
//!
//! The crate covers the full pipeline for learning QUBO solution maps on a
//! fixed problem graph:
//!
//! - [`qubo`]: instances `x⊤Ax + x⊤b`, delta evaluation, nodal residuals,
//!   instance generators and the QUBO to Ising mapping.
//! - [`solvers`]: Gray-code exhaustive search, Tabu search and ballistic
//!   simulated bifurcation.
//! - [`data`]: self-supervised generation of observation/solution pairs from
//!   the log-barrier stationarity condition.
//! - [`tensor`]: a small reverse-mode tape over dense matrices plus Adam.
//! - [`bpgnn`]: the reaction-diffusion graph network with residual-aware
//!   node features, its training loop and parameter store.
//! - [`eval`]: metrics, landscape and sensitivity probes, hybrid inference.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature; the only thing `std` adds is wall-clock timing of solver calls.
#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bpgnn;
pub mod data;
pub mod error;
pub mod eval;
pub mod qubo;
pub mod rng;
pub mod solvers;
pub mod tensor;
mod timer;

pub use error::{Error, Result};
pub use qubo::{BinaryAssignment, GraphView, ObservedVector, QuboInstance};
pub use solvers::SolverResult;
