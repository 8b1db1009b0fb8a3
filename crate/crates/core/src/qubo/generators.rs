use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::{InstanceMeta, ObservedVector, QuboInstance};
use crate::error::{Error, Result};
use crate::rng;

/// Dense `k x k` matrix with i.i.d. `N(0, scale²)` entries, all `k²`
/// coordinates stored.
///
/// # Panics
/// If `k == 0`.
pub fn gen_random_dense(k: usize, seed: u64, scale: f64) -> QuboInstance {
    assert!(k >= 1, "k must be positive");
    let mut r = rng::stream(seed);
    let values = rng::normal_vec(&mut r, k * k);
    let entries = (0..k * k).map(|idx| (idx / k, idx % k, values[idx] * scale)).collect();
    let meta = InstanceMeta {
        generator: "random_dense".to_string(),
        seed: Some(seed),
        tags: vec![format!("scale={scale}")],
    };
    QuboInstance::new(k, entries, meta).expect("generated coordinates are valid")
}

fn grid_edges(n: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for r in 0..n {
        for c in 0..n {
            let i = r * n + c;
            if c + 1 < n {
                edges.push((i, i + 1));
            }
            if r + 1 < n {
                edges.push((i, i + n));
            }
        }
    }
    edges
}

/// Graph Laplacian of the `n x n` four-neighbour grid (`k = n²`, node
/// `(r, c)` is index `r n + c`).
///
/// # Panics
/// If `n < 2`.
pub fn gen_lattice_laplacian(n: usize) -> QuboInstance {
    assert!(n >= 2, "lattice side must be at least 2");
    let k = n * n;
    let mut degree = vec![0.0; k];
    let mut entries = Vec::new();
    for (i, j) in grid_edges(n) {
        degree[i] += 1.0;
        degree[j] += 1.0;
        entries.push((i, j, -1.0));
        entries.push((j, i, -1.0));
    }
    entries.extend(degree.iter().enumerate().map(|(i, &d)| (i, i, d)));
    entries.sort_by_key(|e| (e.0, e.1));
    let meta = InstanceMeta {
        generator: "lattice_laplacian".to_string(),
        seed: None,
        tags: vec![format!("n={n}")],
    };
    QuboInstance::new(k, entries, meta).expect("generated coordinates are valid")
}

/// Binary symmetric adjacency of the `n x n` four-neighbour grid, both
/// triangles stored.
pub fn lattice_adjacency(n: usize) -> QuboInstance {
    assert!(n >= 2, "lattice side must be at least 2");
    let mut entries: Vec<_> = grid_edges(n)
        .into_iter()
        .flat_map(|(i, j)| [(i, j, 1.0), (j, i, 1.0)])
        .collect();
    entries.sort_by_key(|e| (e.0, e.1));
    let meta = InstanceMeta {
        generator: "lattice_adjacency".to_string(),
        seed: None,
        tags: vec![format!("n={n}")],
    };
    QuboInstance::new(n * n, entries, meta).expect("generated coordinates are valid")
}

/// Ising model `x⊤Ax - β x⊤e` as a QUBO: `A` is the adjacency exactly as
/// given and `b = -β e`.
///
/// Storage matters: an edge stored in both triangles contributes
/// `2 x_i x_j` to the objective, an edge stored once contributes `x_i x_j`.
pub fn gen_ising(adjacency: &QuboInstance, b_scalar: f64) -> Result<(QuboInstance, ObservedVector)> {
    for &(i, j, v) in adjacency.entries() {
        if v != 0.0 && v != 1.0 {
            return Err(Error::invalid(format!(
                "adjacency entry ({i}, {j}) = {v} is not binary"
            )));
        }
        if i == j && v != 0.0 {
            return Err(Error::invalid(format!("adjacency has a self-loop at {i}")));
        }
    }
    if !b_scalar.is_finite() {
        return Err(Error::invalid("field strength must be finite"));
    }
    let mut meta = adjacency.meta().clone();
    meta.tags.push(format!("ising_b={b_scalar}"));
    let instance = adjacency.clone().with_meta(meta);
    let b = ObservedVector::new(vec![-b_scalar; adjacency.k()])?;
    Ok((instance, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::{evaluate, BinaryAssignment};

    #[test]
    fn dense_is_deterministic_and_full() {
        let a = gen_random_dense(20, 5, 1.0);
        let b = gen_random_dense(20, 5, 1.0);
        assert_eq!(a.entries(), b.entries());
        assert_eq!(a.entries().len(), 400);
        assert_ne!(a.entries(), gen_random_dense(20, 6, 1.0).entries());
    }

    #[test]
    fn lattice_two_by_two() {
        let l = gen_lattice_laplacian(2);
        let d = l.matrix().to_dense();
        #[rustfmt::skip]
        let expected = [
             2.0, -1.0, -1.0,  0.0,
            -1.0,  2.0,  0.0, -1.0,
            -1.0,  0.0,  2.0, -1.0,
             0.0, -1.0, -1.0,  2.0,
        ];
        assert_eq!(d, expected);
    }

    #[test]
    fn lattice_rows_sum_to_zero_and_degrees() {
        for n in 2..7 {
            let l = gen_lattice_laplacian(n);
            let d = l.matrix().to_dense();
            let k = n * n;
            for i in 0..k {
                assert_eq!(d[i * k..(i + 1) * k].iter().sum::<f64>(), 0.0);
                for j in 0..k {
                    assert_eq!(d[i * k + j], d[j * k + i]);
                }
            }
        }
        let l3 = gen_lattice_laplacian(3);
        assert_eq!(l3.diag(), &[2.0, 3.0, 2.0, 3.0, 4.0, 3.0, 2.0, 3.0, 2.0]);
    }

    #[test]
    fn ising_storage_convention() {
        let both = QuboInstance::new(2, vec![(0, 1, 1.0), (1, 0, 1.0)], InstanceMeta::default()).unwrap();
        let upper = QuboInstance::new(2, vec![(0, 1, 1.0)], InstanceMeta::default()).unwrap();
        let ones = BinaryAssignment::ones(2);
        let (ib, bb) = gen_ising(&both, 1.0).unwrap();
        let (iu, bu) = gen_ising(&upper, 1.0).unwrap();
        // f([1,1]) = (edge count as stored) - 2
        assert_eq!(evaluate(&ib, &bb, &ones).unwrap(), 0.0);
        assert_eq!(evaluate(&iu, &bu, &ones).unwrap(), -1.0);
        let (_, b0) = gen_ising(&both, 0.0).unwrap();
        assert!(b0.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn ising_rejects_non_binary() {
        let bad = QuboInstance::new(2, vec![(0, 1, 0.5)], InstanceMeta::default()).unwrap();
        assert!(matches!(gen_ising(&bad, 1.0), Err(Error::InvalidParameter(_))));
    }
}
