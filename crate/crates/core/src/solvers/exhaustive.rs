use alloc::string::ToString;
use alloc::vec;

use super::SolverResult;
use crate::error::{check_len, Error, Result};
use crate::qubo::objective::{delta, objective};
use crate::qubo::{BinaryAssignment, ObservedVector, QuboInstance};
use crate::timer::Stopwatch;

/// Largest `k` enumerated by [`exhaustive_solve`].
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 26;

const RESYNC_EVERY: u64 = 1 << 16;

/// Exact minimizer by Gray-code enumeration of all `2^k` assignments.
pub fn exhaustive_solve(instance: &QuboInstance, b: &ObservedVector) -> Result<SolverResult> {
    exhaustive_solve_with_cap(instance, b, DEFAULT_EXHAUSTIVE_CAP)
}

/// As [`exhaustive_solve`] with an explicit size cap (at most 63).
///
/// Consecutive Gray codes differ in one bit, so each step costs a single
/// delta evaluation. Objectives within `1e-9 (1 + |f|)` of each other count
/// as ties and resolve to the lexicographically smallest assignment.
pub fn exhaustive_solve_with_cap(
    instance: &QuboInstance,
    b: &ObservedVector,
    cap: usize,
) -> Result<SolverResult> {
    let k = instance.k();
    check_len(k, b.len())?;
    let cap = cap.min(63);
    if k > cap {
        return Err(Error::IntractableSize { k, cap });
    }
    let clock = Stopwatch::start();
    let mut x = vec![0u8; k];
    let mut f = 0.0;
    let mut best_x = x.clone();
    let mut best_f = 0.0f64;
    let total = 1u64 << k;
    for g in 1..total {
        let i = g.trailing_zeros() as usize;
        f += delta(instance, b, &x, i);
        x[i] ^= 1;
        if g % RESYNC_EVERY == 0 {
            f = objective(instance, b, &x);
        }
        let tol = 1e-9 * (1.0 + best_f.abs());
        if f < best_f - tol || (f <= best_f + tol && x < best_x) {
            best_f = best_f.min(f);
            best_x.copy_from_slice(&x);
        }
    }
    let f_best = objective(instance, b, &best_x);
    Ok(SolverResult {
        solver: "exhaustive".to_string(),
        x_best: BinaryAssignment::new(best_x)?,
        f_best,
        iterations: total as usize,
        evaluations: total as usize,
        elapsed_ms: clock.elapsed_ms(),
        trace: None,
        stopped_early: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::{evaluate, gen_random_dense, InstanceMeta};
    use crate::rng;

    /// Independent oracle: evaluate every assignment from scratch.
    fn naive(instance: &QuboInstance, b: &ObservedVector) -> (BinaryAssignment, f64) {
        let k = instance.k();
        let mut best: Option<(BinaryAssignment, f64)> = None;
        for mask in 0..(1u64 << k) {
            let x = BinaryAssignment::from_mask(mask, k);
            let f = evaluate(instance, b, &x).unwrap();
            best = match best {
                None => Some((x, f)),
                Some((bx, bf)) => {
                    let tol = 1e-9 * (1.0 + bf.abs());
                    if f < bf - tol || (f <= bf + tol && x < bx) {
                        Some((x, f.min(bf)))
                    } else {
                        Some((bx, bf))
                    }
                }
            };
        }
        best.unwrap()
    }

    #[test]
    fn two_node_instance() {
        let inst = QuboInstance::new(2, vec![(0, 1, 1.0)], InstanceMeta::default()).unwrap();
        let b = ObservedVector::new(vec![-1.0, 0.5]).unwrap();
        let r = exhaustive_solve(&inst, &b).unwrap();
        assert_eq!(r.x_best.as_slice(), &[1, 0]);
        assert_eq!(r.f_best, -1.0);
        assert_eq!(r.evaluations, 4);
    }

    #[test]
    fn nonnegative_problem_gives_zeros() {
        let entries = (0..5).flat_map(|i| (0..5).map(move |j| (i, j, (i + j) as f64 * 0.1))).collect();
        let inst = QuboInstance::new(5, entries, InstanceMeta::default()).unwrap();
        let b = ObservedVector::new(vec![0.0, 1.0, 2.0, 0.0, 0.5]).unwrap();
        let r = exhaustive_solve(&inst, &b).unwrap();
        assert_eq!(r.x_best, BinaryAssignment::zeros(5));
        assert_eq!(r.f_best, 0.0);
    }

    #[test]
    fn ties_resolve_lexicographically() {
        // f = 0 for every assignment
        let inst = QuboInstance::new(3, vec![], InstanceMeta::default()).unwrap();
        let r = exhaustive_solve(&inst, &ObservedVector::zeros(3)).unwrap();
        assert_eq!(r.x_best, BinaryAssignment::zeros(3));
        // x0 and x1 both optimal at -1 individually, mutually exclusive
        let inst = QuboInstance::new(2, vec![(0, 1, 5.0)], InstanceMeta::default()).unwrap();
        let b = ObservedVector::new(vec![-1.0, -1.0]).unwrap();
        let r = exhaustive_solve(&inst, &b).unwrap();
        assert_eq!(r.x_best.as_slice(), &[0, 1]);
    }

    #[test]
    fn matches_naive_enumeration() {
        for seed in 0..10 {
            let inst = gen_random_dense(12, seed, 1.0);
            let b = ObservedVector::new(rng::normal_vec(&mut rng::stream(seed ^ 77), 12)).unwrap();
            let r = exhaustive_solve(&inst, &b).unwrap();
            let (x, f) = naive(&inst, &b);
            assert_eq!(r.x_best, x);
            assert!((r.f_best - f).abs() <= 1e-9);
        }
    }

    #[test]
    fn refuses_above_cap() {
        let inst = gen_random_dense(5, 0, 1.0);
        let err = exhaustive_solve_with_cap(&inst, &ObservedVector::zeros(5), 4).unwrap_err();
        assert_eq!(err, Error::IntractableSize { k: 5, cap: 4 });
        assert!(alloc::format!("{err}").contains("cap of 4"));
    }
}
