use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use qubo_core::data::{DataGenParams, DataPair, Dataset, Provenance, Split};
use qubo_core::qubo::{BinaryAssignment, ObservedVector};
use serde::{Deserialize, Serialize};

use super::{FormatError, Result};

#[derive(Serialize, Deserialize)]
struct Header {
    k: usize,
    instance: String,
    params: DataGenParams,
}

#[derive(Serialize)]
struct RecordOut<'a> {
    b: &'a ObservedVector,
    x: &'a BinaryAssignment,
    split: Split,
    provenance: &'a Provenance,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordIn {
    b: ObservedVector,
    x: BinaryAssignment,
    split: Split,
    provenance: Provenance,
}

/// Header line, then one record per pair in index order.
pub fn write_dataset_to(dataset: &Dataset, mut w: impl Write) -> std::io::Result<()> {
    let header = Header {
        k: dataset.k,
        instance: dataset.instance.clone(),
        params: dataset.params.clone(),
    };
    serde_json::to_writer(&mut w, &header)?;
    w.write_all(b"\n")?;
    for (pair, &split) in dataset.pairs.iter().zip(&dataset.splits) {
        let rec = RecordOut {
            b: &pair.b,
            x: &pair.x,
            split,
            provenance: &pair.provenance,
        };
        serde_json::to_writer(&mut w, &rec)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

pub fn write_dataset(dataset: &Dataset, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| FormatError::io(dir, e))?;
    }
    let f = File::create(path).map_err(|e| FormatError::io(path, e))?;
    write_dataset_to(dataset, BufWriter::new(f)).map_err(|e| FormatError::io(path, e))
}

pub fn read_dataset(path: &Path) -> Result<Dataset> {
    let f = File::open(path).map_err(|e| FormatError::io(path, e))?;
    let mut lines = BufReader::new(f).lines().enumerate().map(|(i, l)| (i + 1, l));
    let header: Header = match lines.next() {
        Some((n, line)) => {
            let line = line.map_err(|e| FormatError::io(path, e))?;
            serde_json::from_str(&line).map_err(|e| FormatError::parse(path, n, e))?
        }
        None => return Err(FormatError::invalid(path, "empty dataset file")),
    };
    let mut pairs = Vec::new();
    let mut splits = Vec::new();
    for (n, line) in lines {
        let line = line.map_err(|e| FormatError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: RecordIn = serde_json::from_str(&line).map_err(|e| FormatError::parse(path, n, e))?;
        for (what, len) in [("b", rec.b.len()), ("x", rec.x.len())] {
            if len != header.k {
                return Err(FormatError::parse(
                    path,
                    n,
                    format!("`{what}` has length {len} but the header says k = {}", header.k),
                ));
            }
        }
        pairs.push(DataPair {
            b: rec.b,
            x: rec.x,
            provenance: rec.provenance,
        });
        splits.push(rec.split);
    }
    Dataset::new(header.k, &header.instance, header.params, pairs, splits).map_err(|e| FormatError::invalid(path, e))
}
