//! Classical QUBO solvers.

mod exhaustive;
mod sab;
mod tabu;

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::qubo::BinaryAssignment;

pub use exhaustive::{exhaustive_solve, exhaustive_solve_with_cap, DEFAULT_EXHAUSTIVE_CAP};
pub use sab::{sab_solve, SabParams};
pub use tabu::{refine_with_tabu, tabu_solve, TabuParams};

/// Outcome of a solver run. `f_best` is always recomputed from `x_best`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverResult {
    pub solver: String,
    pub x_best: BinaryAssignment,
    pub f_best: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub elapsed_ms: f64,
    /// Best objective after each iteration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<f64>>,
    /// Set when Tabu search ran out of admissible neighbours.
    #[serde(default, skip_serializing_if = "core::ops::Not::not")]
    pub stopped_early: bool,
}
