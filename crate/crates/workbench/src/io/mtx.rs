use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use qubo_core::qubo::{InstanceMeta, QuboInstance};
use serde::{Deserialize, Serialize};

use super::{read_text, write_text, FormatError, Result};

const HEADER: &str = "%%MatrixMarket matrix coordinate real general";

#[derive(Serialize, Deserialize)]
struct MetaFile {
    k: usize,
    generator: String,
    seed: Option<u64>,
    #[serde(default)]
    tags: Vec<String>,
}

/// `foo.mtx` -> `foo.meta.json`.
pub fn meta_path(mtx: &Path) -> PathBuf {
    mtx.with_extension("meta.json")
}

pub fn write_instance(instance: &QuboInstance, path: &Path) -> Result<()> {
    let k = instance.k();
    let mut out = format!("{HEADER}\n{k} {k} {}\n", instance.entries().len());
    for &(i, j, v) in instance.entries() {
        writeln!(out, "{} {} {v:?}", i + 1, j + 1).expect("string write");
    }
    write_text(path, &out)?;
    let meta = instance.meta();
    let file = MetaFile {
        k,
        generator: meta.generator.clone(),
        seed: meta.seed,
        tags: meta.tags.clone(),
    };
    let json = serde_json::to_string_pretty(&file).expect("plain struct");
    write_text(&meta_path(path), &(json + "\n"))
}

/// Reads a coordinate-format matrix. The metadata sidecar is optional; when
/// present its `k` must match the matrix.
pub fn read_instance(path: &Path) -> Result<QuboInstance> {
    let text = read_text(path)?;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.next() {
        Some((_, l)) if l.eq_ignore_ascii_case(HEADER) => {}
        _ => return Err(FormatError::parse(path, 1, format!("expected `{HEADER}`"))),
    }
    let mut body = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let (size_line, size) = body
        .next()
        .ok_or_else(|| FormatError::invalid(path, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| FormatError::parse(path, size_line, e))?;
    let [rows, cols, nnz] = dims[..] else {
        return Err(FormatError::parse(path, size_line, "size line needs `rows cols nnz`"));
    };
    if rows != cols {
        return Err(FormatError::parse(path, size_line, format!("matrix must be square, got {rows}x{cols}")));
    }
    let mut entries = Vec::with_capacity(nnz);
    for (line, l) in body {
        let mut it = l.split_whitespace();
        let (Some(i), Some(j), Some(v), None) = (it.next(), it.next(), it.next(), it.next()) else {
            return Err(FormatError::parse(path, line, "expected `row col value`"));
        };
        let i: usize = i.parse().map_err(|e| FormatError::parse(path, line, e))?;
        let j: usize = j.parse().map_err(|e| FormatError::parse(path, line, e))?;
        let v: f64 = v.parse().map_err(|e| FormatError::parse(path, line, e))?;
        if i == 0 || j == 0 || i > rows || j > cols {
            return Err(FormatError::parse(path, line, format!("coordinate ({i}, {j}) outside 1..={rows}")));
        }
        entries.push((i - 1, j - 1, v));
    }
    if entries.len() != nnz {
        return Err(FormatError::invalid(
            path,
            format!("size line promises {nnz} entries, found {}", entries.len()),
        ));
    }
    let meta_file = meta_path(path);
    let meta = if meta_file.exists() {
        let m: MetaFile = serde_json::from_str(&read_text(&meta_file)?)
            .map_err(|e| FormatError::parse(&meta_file, e.line(), e))?;
        if m.k != rows {
            return Err(FormatError::invalid(
                &meta_file,
                format!("k = {} does not match the {rows}x{rows} matrix", m.k),
            ));
        }
        InstanceMeta {
            generator: m.generator,
            seed: m.seed,
            tags: m.tags,
        }
    } else {
        InstanceMeta::default()
    };
    QuboInstance::new(rows, entries, meta).map_err(|e| FormatError::invalid(path, e))
}
