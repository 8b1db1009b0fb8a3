//! Dense matrices with a reverse-mode tape and Adam.
//!
//! Only the handful of operations the graph network uses are provided. All
//! tensors are two-dimensional; a scalar is `1 x 1`.

mod adam;
mod tape;
mod value;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use tape::{SparseOperator, Tape, Var};
pub use value::Tensor;
