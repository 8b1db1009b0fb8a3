use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::sparse::Csr;
use crate::error::{Error, Result};

/// Provenance attached to an instance.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub generator: String,
    pub seed: Option<u64>,
    #[serde(default)]
    pub tags: Vec<String>,
}

/// A QUBO matrix `A` of size `k x k`, stored exactly as given.
///
/// The coordinate list is the canonical form. Row-compressed views of `A`,
/// `A⊤`, and of the off-diagonal coupling `A + A⊤` are compiled once at
/// construction; nothing is symmetrized in place.
#[derive(Debug, Clone)]
pub struct QuboInstance {
    k: usize,
    entries: Vec<(usize, usize, f64)>,
    meta: InstanceMeta,
    a: Csr,
    at: Csr,
    coupling: Csr,
    diag: Vec<f64>,
}

impl PartialEq for QuboInstance {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.entries == other.entries && self.meta == other.meta
    }
}

impl QuboInstance {
    pub fn new(k: usize, entries: Vec<(usize, usize, f64)>, meta: InstanceMeta) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k must be positive"));
        }
        let mut seen = BTreeSet::new();
        for (idx, &(row, col, v)) in entries.iter().enumerate() {
            if row >= k || col >= k {
                return Err(Error::CoordinateOutOfRange { row, col, k });
            }
            if !v.is_finite() {
                return Err(Error::NonFinite { index: idx });
            }
            if !seen.insert((row, col)) {
                return Err(Error::DuplicateCoordinate { row, col });
            }
        }
        let a = Csr::from_triplets(k, entries.iter().copied());
        let at = a.transpose();
        let mut diag = alloc::vec![0.0; k];
        let mut off = Vec::with_capacity(2 * entries.len());
        for &(i, j, v) in &entries {
            if i == j {
                diag[i] += v;
            } else {
                off.push((i, j, v));
                off.push((j, i, v));
            }
        }
        let coupling = Csr::from_triplets(k, off);
        Ok(QuboInstance {
            k,
            entries,
            meta,
            a,
            at,
            coupling,
            diag,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn meta(&self) -> &InstanceMeta {
        &self.meta
    }

    pub fn with_meta(mut self, meta: InstanceMeta) -> Self {
        self.meta = meta;
        self
    }

    /// Row-compressed `A`.
    pub fn matrix(&self) -> &Csr {
        &self.a
    }

    /// Row-compressed `A⊤`.
    pub fn matrix_t(&self) -> &Csr {
        &self.at
    }

    /// Off-diagonal part of `A + A⊤`.
    pub fn coupling(&self) -> &Csr {
        &self.coupling
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.entries.iter().map(|e| e.2 * e.2).sum())
    }

    pub fn graph(&self) -> GraphView {
        GraphView::from_pattern(self.k, self.entries.iter().filter(|e| e.2 != 0.0).map(|e| (e.0, e.1)))
    }

    /// Relabels nodes so that node `i` becomes `perm[i]` (`P A P⊤`).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        crate::error::check_len(self.k, perm.len())?;
        let entries = self
            .entries
            .iter()
            .map(|&(i, j, v)| (perm[i], perm[j], v))
            .collect();
        QuboInstance::new(self.k, entries, self.meta.clone())
    }
}

/// Undirected connectivity implied by the sparsity pattern of `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphView {
    k: usize,
    edges: Vec<(usize, usize)>,
    degree: Vec<usize>,
}

impl GraphView {
    /// Edges `{i, j}` with `i != j` for every listed coordinate, in either
    /// orientation; self-loops are dropped.
    pub fn from_pattern(k: usize, coords: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let set: BTreeSet<(usize, usize)> = coords
            .into_iter()
            .filter(|(i, j)| i != j)
            .map(|(i, j)| if i < j { (i, j) } else { (j, i) })
            .collect();
        let edges: Vec<_> = set.into_iter().collect();
        let mut degree = alloc::vec![0; k];
        for &(i, j) in &edges {
            degree[i] += 1;
            degree[j] += 1;
        }
        GraphView { k, edges, degree }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Sorted `(i, j)` pairs with `i < j`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self) -> &[usize] {
        &self.degree
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_bad_coordinates() {
        let m = InstanceMeta::default();
        assert_eq!(
            QuboInstance::new(2, vec![(0, 2, 1.0)], m.clone()),
            Err(Error::CoordinateOutOfRange { row: 0, col: 2, k: 2 })
        );
        assert_eq!(
            QuboInstance::new(2, vec![(0, 1, 1.0), (0, 1, 2.0)], m),
            Err(Error::DuplicateCoordinate { row: 0, col: 1 })
        );
    }

    #[test]
    fn graph_ignores_sign_direction_and_diagonal() {
        let inst = QuboInstance::new(
            3,
            vec![(0, 1, -2.0), (1, 0, 5.0), (2, 2, 1.0), (2, 0, 0.5)],
            InstanceMeta::default(),
        )
        .unwrap();
        let g = inst.graph();
        assert_eq!(g.edges(), &[(0, 1), (0, 2)]);
        assert_eq!(g.degree(), &[2, 1, 1]);
    }

    #[test]
    fn coupling_is_off_diagonal_symmetric_sum() {
        let inst = QuboInstance::new(
            2,
            vec![(0, 1, 1.0), (1, 0, 3.0), (1, 1, 7.0)],
            InstanceMeta::default(),
        )
        .unwrap();
        assert_eq!(inst.coupling().to_dense(), [0.0, 4.0, 4.0, 0.0]);
        assert_eq!(inst.diag(), &[0.0, 7.0]);
        assert_eq!(inst.matrix_t().to_dense(), [0.0, 3.0, 1.0, 7.0]);
    }
}
