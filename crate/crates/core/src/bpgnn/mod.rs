//! Reaction-diffusion graph network that maps an observed vector `b` to
//! per-node logits of the QUBO solution.
//!
//! Each layer computes the residual features `r = h ⊙ (A h + b 1⊤)`, takes a
//! forward-Euler diffusion step with the normalized Laplacian on
//! `h + g(r)`, then a forward-Euler reaction step `h + ε f(h)`.

mod config;
mod laplacian;
mod model;
mod train;

pub use config::BpgnnConfig;
pub use laplacian::build_laplacian;
pub use model::{forward, predict, BpgnnModel, GraphOperators, Mode};
pub use train::{hyperparameter_grid, train, EpochRecord, GridPoint, TrainConfig, MAX_EPOCHS};
