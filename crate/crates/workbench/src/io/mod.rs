//! Readers and writers for every on-disk artifact.

mod checkpoint;
mod dataset;
mod mtx;
mod tables;
mod vector;

use std::path::{Path, PathBuf};

pub use checkpoint::{load_checkpoint, load_checkpoint_as, save_checkpoint, Checkpoint};
pub use dataset::{read_dataset, write_dataset, write_dataset_to};
pub use mtx::{meta_path, read_instance, write_instance};
pub use tables::{
    write_bench_csv, write_eval_csv, write_history_csv, write_landscape_csv, write_sweep_csv,
};
pub use vector::{read_vector, write_vector};

use qubo_core::solvers::SolverResult;

pub fn write_solver_result(res: &SolverResult, path: &Path) -> Result<()> {
    write_text(path, &(serde_json::to_string_pretty(res).expect("plain struct") + "\n"))
}

pub fn read_solver_result(path: &Path) -> Result<SolverResult> {
    serde_json::from_str(&read_text(path)?).map_err(|e| FormatError::parse(path, e.line(), e))
}

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("cannot access {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}: {msg}", path.display())]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("{}: {msg}", path.display())]
    Invalid { path: PathBuf, msg: String },
}

impl FormatError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        FormatError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn parse(path: &Path, line: usize, msg: impl ToString) -> Self {
        FormatError::Parse {
            path: path.to_path_buf(),
            line,
            msg: msg.to_string(),
        }
    }

    pub(crate) fn invalid(path: &Path, msg: impl ToString) -> Self {
        FormatError::Invalid {
            path: path.to_path_buf(),
            msg: msg.to_string(),
        }
    }
}

pub type Result<T, E = FormatError> = std::result::Result<T, E>;

pub(crate) fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| FormatError::io(path, e))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| FormatError::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| FormatError::io(path, e))
}
