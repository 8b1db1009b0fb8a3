use proptest::prelude::*;
use qubo_core::bpgnn::{BpgnnConfig, BpgnnModel};
use qubo_core::eval::{accuracy, rel_qubo};
use qubo_core::qubo::{
    evaluate, flip_delta, qubo_to_ising, residual, BinaryAssignment, InstanceMeta, ObservedVector, QuboInstance,
};
use qubo_core::solvers::refine_with_tabu;

/// Instance with a dense random coefficient table, a field and an assignment.
fn problem() -> impl Strategy<Value = (QuboInstance, ObservedVector, BinaryAssignment)> {
    (1usize..12).prop_flat_map(|k| {
        (
            prop::collection::vec(prop::option::weighted(0.6, -5.0f64..5.0), k * k),
            prop::collection::vec(-5.0f64..5.0, k),
            prop::collection::vec(0u8..2, k),
        )
            .prop_map(move |(a, b, x)| {
                let entries = a
                    .iter()
                    .enumerate()
                    .filter_map(|(n, v)| v.map(|v| (n / k, n % k, v)))
                    .collect();
                (
                    QuboInstance::new(k, entries, InstanceMeta::default()).unwrap(),
                    ObservedVector::new(b).unwrap(),
                    BinaryAssignment::new(x).unwrap(),
                )
            })
    })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #[test]
    fn flip_delta_matches_difference((inst, b, x) in problem(), i in 0usize..12) {
        let i = i % inst.k();
        let d = flip_delta(&inst, &b, &x, i).unwrap();
        let diff = evaluate(&inst, &b, &x.flipped(i)).unwrap() - evaluate(&inst, &b, &x).unwrap();
        prop_assert!(close(d, diff));
    }

    #[test]
    fn residual_sums_to_objective((inst, b, x) in problem()) {
        let r: f64 = residual(&inst, &b, &x.to_reals()).unwrap().iter().sum();
        prop_assert!(close(r, evaluate(&inst, &b, &x).unwrap()));
    }

    #[test]
    fn ising_energy_plus_offset_is_objective((inst, b, x) in problem()) {
        let m = qubo_to_ising(&inst, &b).unwrap();
        let s: Vec<f64> = x.iter().map(|&v| 2.0 * f64::from(v) - 1.0).collect();
        prop_assert!(close(m.energy(&s) + m.c, evaluate(&inst, &b, &x).unwrap()));
    }

    #[test]
    fn refinement_never_worsens((inst, b, x) in problem(), steps in 0usize..20) {
        let res = refine_with_tabu(&inst, &b, &x, steps).unwrap();
        prop_assert!(res.f_best <= evaluate(&inst, &b, &x).unwrap() + 1e-12);
    }

    #[test]
    fn metrics_are_permutation_invariant((inst, b, x) in problem(), y in prop::collection::vec(0u8..2, 12), seed in any::<u64>()) {
        let k = inst.k();
        let y = BinaryAssignment::new(y[..k].to_vec()).unwrap();
        let mut perm: Vec<usize> = (0..k).collect();
        let mut s = seed;
        for i in (1..k).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let pinst = inst.permuted(&perm).unwrap();
        let mut pb = vec![0.0; k];
        for i in 0..k {
            pb[perm[i]] = b[i];
        }
        let pb = ObservedVector::new(pb).unwrap();
        let (px, py) = (x.permuted(&perm), y.permuted(&perm));
        prop_assert_eq!(accuracy(&x, &y).unwrap(), accuracy(&px, &py).unwrap());
        match (rel_qubo(&inst, &b, &x, &y), rel_qubo(&pinst, &pb, &px, &py)) {
            (Ok(a), Ok(c)) => prop_assert!(close(a, c)),
            (a, c) => prop_assert_eq!(a.is_err(), c.is_err()),
        }
    }

    #[test]
    fn diffusion_coefficients_stay_non_negative(raw in prop::collection::vec(-1e3f64..1e3, 3)) {
        let mut m = BpgnnModel::new(BpgnnConfig { d: 3, layers: 1, ..BpgnnConfig::default() }).unwrap();
        m.param_mut("layer0.sigma").unwrap().data_mut().copy_from_slice(&raw);
        prop_assert!(m.diffusion_coefficients(0).iter().all(|&c| c >= 0.0 && c.is_finite()));
    }
}
