use crate::qubo::{Csr, QuboInstance};

/// `I - D^{-1/2} Ā D^{-1/2}` where `Ā` is the unweighted, symmetrized
/// connectivity of `A` without self-loops. Isolated nodes get `L_ii = 1`.
pub fn build_laplacian(instance: &QuboInstance) -> Csr {
    let graph = instance.graph();
    let inv_sqrt: alloc::vec::Vec<f64> = graph
        .degree()
        .iter()
        .map(|&d| if d > 0 { 1.0 / libm::sqrt(d as f64) } else { 0.0 })
        .collect();
    let diag = (0..graph.k()).map(|i| (i, i, 1.0));
    let off = graph.edges().iter().flat_map(|&(i, j)| {
        let w = -inv_sqrt[i] * inv_sqrt[j];
        [(i, j, w), (j, i, w)]
    });
    Csr::from_triplets(graph.k(), diag.chain(off))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::{gen_lattice_laplacian, gen_random_dense, InstanceMeta};
    use crate::rng;
    use alloc::vec;
    use alloc::vec::Vec;

    #[test]
    fn single_edge() {
        let inst = QuboInstance::new(2, vec![(0, 1, 3.5)], InstanceMeta::default()).unwrap();
        assert_eq!(build_laplacian(&inst).to_dense(), [1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn isolated_node_has_unit_diagonal() {
        let inst = QuboInstance::new(3, vec![(0, 1, 1.0), (2, 2, 4.0)], InstanceMeta::default()).unwrap();
        let l = build_laplacian(&inst).to_dense();
        assert_eq!(l[2 * 3 + 2], 1.0);
        assert_eq!(&l[6..8], &[0.0, 0.0]);
    }

    #[test]
    fn four_cycle_spectrum() {
        let entries = vec![(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)];
        let inst = QuboInstance::new(4, entries, InstanceMeta::default()).unwrap();
        let l = build_laplacian(&inst);
        // analytic eigenpairs of the normalized 4-cycle Laplacian: {0, 1, 1, 2}
        let pairs: [([f64; 4], f64); 4] = [
            ([1.0, 1.0, 1.0, 1.0], 0.0),
            ([1.0, 0.0, -1.0, 0.0], 1.0),
            ([0.0, 1.0, 0.0, -1.0], 1.0),
            ([1.0, -1.0, 1.0, -1.0], 2.0),
        ];
        for (v, lambda) in pairs {
            let lv = l.matvec(&v);
            for i in 0..4 {
                assert!((lv[i] - lambda * v[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn regular_graph_null_vector() {
        // a 3x3 torus-free grid is not regular, a dense graph is
        let l = build_laplacian(&gen_random_dense(7, 1, 1.0));
        assert!(l.matvec(&[1.0; 7]).iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn rayleigh_quotients_within_zero_two() {
        let l = build_laplacian(&gen_lattice_laplacian(5));
        let mut r = rng::stream(1);
        for _ in 0..200 {
            let x: Vec<f64> = rng::normal_vec(&mut r, 25);
            let lx = l.matvec(&x);
            let q = x.iter().zip(&lx).map(|(a, b)| a * b).sum::<f64>() / x.iter().map(|a| a * a).sum::<f64>();
            assert!((-1e-12..=2.0 + 1e-12).contains(&q));
        }
        let d = l.to_dense();
        for i in 0..25 {
            for j in 0..25 {
                assert_eq!(d[i * 25 + j], d[j * 25 + i]);
            }
        }
    }
}
