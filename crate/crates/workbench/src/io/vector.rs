use std::fmt::Write as _;
use std::path::Path;

use qubo_core::qubo::ObservedVector;

use super::{read_text, write_text, FormatError, Result};

/// One value per line; blank lines and `#` comments are skipped.
pub fn read_vector(path: &Path) -> Result<ObservedVector> {
    let mut v = Vec::new();
    for (n, line) in read_text(path)?.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        v.push(line.parse::<f64>().map_err(|e| FormatError::parse(path, n + 1, e))?);
    }
    ObservedVector::new(v).map_err(|e| FormatError::invalid(path, e))
}

pub fn write_vector(v: &[f64], path: &Path) -> Result<()> {
    let mut out = String::new();
    for x in v {
        writeln!(out, "{x:?}").expect("string write");
    }
    write_text(path, &out)
}
