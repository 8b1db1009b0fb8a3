//! QUBO problem representation and the operations every other module
//! builds on.

mod generators;
mod instance;
mod ising;
pub(crate) mod objective;
pub mod sparse;
mod vectors;

pub use generators::{gen_ising, gen_lattice_laplacian, gen_random_dense, lattice_adjacency};
pub use instance::{GraphView, InstanceMeta, QuboInstance};
pub use ising::{qubo_to_ising, IsingModel};
pub use objective::{evaluate, flip_delta, residual};
pub use sparse::Csr;
pub use vectors::{BinaryAssignment, ObservedVector};
