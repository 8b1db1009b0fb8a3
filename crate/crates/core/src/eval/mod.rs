//! Metrics, solution-landscape probes and hybrid inference.

mod hybrid;
mod metrics;
mod probes;

pub use hybrid::{hybrid_infer, HybridResult};
pub use metrics::{accuracy, homophily, rel_qubo, EvalRecord, REL_QUBO_MIN_REFERENCE};
pub use probes::{
    ising_sweep, orthonormal_directions, perturbed_minimum, probe_landscape, probe_landscape_with, CellSolver, GridSpec,
    LandscapeGrid, SweepResult,
};
