//! Row-compressed sparse matrices.

use alloc::vec::Vec;

/// Compressed sparse rows of a square `n x n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Csr {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl Csr {
    /// Builds from coordinate triplets. Entries sharing a coordinate are
    /// summed; columns are sorted within each row.
    pub fn from_triplets(n: usize, triplets: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut t: Vec<(usize, usize, f64)> = triplets.into_iter().collect();
        t.sort_by_key(|e| (e.0, e.1));
        let mut row_ptr = alloc::vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(t.len());
        let mut values: Vec<f64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in t {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            last = Some((r, c));
            row_ptr[r + 1] += 1;
            col_idx.push(c);
            values.push(v);
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Csr {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `(column, value)` pairs of row `i`.
    #[inline]
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn transpose(&self) -> Csr {
        Csr::from_triplets(self.n, self.triplets().map(|(i, j, v)| (j, i, v)))
    }

    pub fn scaled(&self, s: f64) -> Csr {
        Csr {
            values: self.values.iter().map(|v| v * s).collect(),
            ..self.clone()
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = alloc::vec![0.0; self.n];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.n) {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }

    /// `Y = M X` for a row-major `X` made of stacked `n x cols` blocks; the
    /// same matrix is applied to every block.
    pub fn spmm_blocks(&self, x: &[f64], cols: usize, y: &mut [f64]) {
        let block = self.n * cols;
        debug_assert_eq!(x.len() % block.max(1), 0);
        for (xb, yb) in x.chunks_exact(block).zip(y.chunks_exact_mut(block)) {
            for i in 0..self.n {
                let out = &mut yb[i * cols..(i + 1) * cols];
                out.iter_mut().for_each(|o| *o = 0.0);
                for (j, v) in self.row(i) {
                    let src = &xb[j * cols..(j + 1) * cols];
                    for (o, s) in out.iter_mut().zip(src) {
                        *o += v * s;
                    }
                }
            }
        }
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = alloc::vec![0.0; self.n * self.n];
        for (i, j, v) in self.triplets() {
            d[i * self.n + j] += v;
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_summed_and_rows_sorted() {
        let m = Csr::from_triplets(2, [(1, 1, 2.0), (0, 1, 1.0), (1, 1, 3.0), (1, 0, -1.0)]);
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.row(1).collect::<Vec<_>>(), [(0, -1.0), (1, 5.0)]);
        assert_eq!(m.to_dense(), [0.0, 1.0, -1.0, 5.0]);
    }

    #[test]
    fn spmm_applies_per_block() {
        let m = Csr::from_triplets(2, [(0, 1, 1.0), (1, 0, 2.0)]);
        // two blocks of 2x2
        let x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];
        let mut y = [0.0; 8];
        m.spmm_blocks(&x, 2, &mut y);
        assert_eq!(y, [3.0, 4.0, 2.0, 4.0, 7.0, 8.0, 10.0, 12.0]);
    }
}
