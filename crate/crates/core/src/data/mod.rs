//! Self-supervised observation/solution pairs.
//!
//! Instead of solving for `x` given `b`, a near-binary `x_o` is drawn first
//! and `b` is chosen so that `x_o` satisfies the stationarity condition of
//! the log-barrier relaxation
//! `(A + A⊤)x + b - μ/x + μ/(1-x) = 0`. Gaussian noise is then added to `b`
//! and a short Tabu search repairs the rounded `x_o`.

mod dataset;
mod generate;

pub use dataset::{assign_splits, Dataset, Split};
pub use generate::{draw_pair, generate_dataset, generate_pair, pair_seed, DataGenParams, DataPair, PairDraw, Provenance};
