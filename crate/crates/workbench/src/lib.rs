//! File formats, benchmark orchestration, and the `qubo` command line on top
//! of `qubo-core`.

pub mod bench;
pub mod cli;
pub mod io;
