use alloc::collections::VecDeque;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::SolverResult;
use crate::error::{check_len, Error, Result};
use crate::qubo::objective::{local_field, objective};
use crate::qubo::{BinaryAssignment, ObservedVector, QuboInstance};
use crate::timer::Stopwatch;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabuParams {
    /// Step budget `T`.
    pub max_steps: usize,
    /// Tabu tenure `ℓ`: how many recent assignments are forbidden.
    pub tenure: usize,
    /// Allow a tabu move when it beats the best objective seen so far.
    pub aspiration: bool,
    pub start: BinaryAssignment,
    /// Stop after this many consecutive steps without a new best.
    pub patience: Option<usize>,
}

impl TabuParams {
    /// Defaults: `T = 1000`, `ℓ = 10`, no aspiration, start from zeros,
    /// stop after 50 steps without improvement.
    pub fn new(k: usize) -> Self {
        TabuParams {
            max_steps: 1000,
            tenure: 10,
            aspiration: false,
            start: BinaryAssignment::zeros(k),
            patience: Some(50),
        }
    }
}

/// Recent assignments, packed 64 bits per word.
struct TabuList {
    tenure: usize,
    entries: VecDeque<Vec<u64>>,
}

impl TabuList {
    fn push(&mut self, x: &[u64]) {
        if self.tenure == 0 {
            return;
        }
        self.entries.push_back(x.to_vec());
        while self.entries.len() > self.tenure {
            self.entries.pop_front();
        }
    }

    /// Marks every single-flip neighbour of `x` that is on the list. A
    /// neighbour `x ⊕ e_i` equals an entry exactly when the entry differs
    /// from `x` in bit `i` alone.
    fn mark_blocked(&self, x: &[u64], blocked: &mut [bool]) {
        blocked.iter_mut().for_each(|b| *b = false);
        for t in &self.entries {
            let mut distance = 0;
            let mut at = 0;
            for (w, (a, b)) in t.iter().zip(x).enumerate() {
                let d = a ^ b;
                if d != 0 {
                    distance += d.count_ones();
                    at = w * 64 + d.trailing_zeros() as usize;
                    if distance > 1 {
                        break;
                    }
                }
            }
            if distance == 1 {
                blocked[at] = true;
            }
        }
    }
}

fn pack(x: &[u8]) -> Vec<u64> {
    let mut words = vec![0u64; x.len().div_ceil(64)];
    for (i, &v) in x.iter().enumerate() {
        if v == 1 {
            words[i / 64] |= 1 << (i % 64);
        }
    }
    words
}

/// Tabu search over single-bit flips.
///
/// Each step moves to the best admissible neighbour even if it is worse
/// than the current point; neighbours whose full assignment is among the
/// last `ℓ` visited points are inadmissible. Returns the best assignment
/// seen, including the start.
pub fn tabu_solve(instance: &QuboInstance, b: &ObservedVector, params: &TabuParams) -> Result<SolverResult> {
    let k = instance.k();
    check_len(k, b.len())?;
    check_len(k, params.start.len())?;
    if params.max_steps == 0 {
        return Err(Error::invalid("tabu max_steps must be at least 1"));
    }
    Ok(run(instance, b, params, "tabu"))
}

/// Short Tabu polish from a given start: `T = ℓ = max_steps`, no early
/// stopping. `max_steps = 0` returns the start unchanged.
pub fn refine_with_tabu(
    instance: &QuboInstance,
    b: &ObservedVector,
    start: &BinaryAssignment,
    max_steps: usize,
) -> Result<SolverResult> {
    let k = instance.k();
    check_len(k, b.len())?;
    check_len(k, start.len())?;
    let params = TabuParams {
        max_steps,
        tenure: max_steps,
        aspiration: false,
        start: start.clone(),
        patience: None,
    };
    Ok(run(instance, b, &params, "tabu_refine"))
}

fn run(instance: &QuboInstance, b: &ObservedVector, params: &TabuParams, name: &str) -> SolverResult {
    let clock = Stopwatch::start();
    let k = instance.k();
    let mut x: Vec<u8> = params.start.to_vec();
    let mut packed = pack(&x);
    let mut field: Vec<f64> = (0..k).map(|i| local_field(instance, b, &x, i)).collect();
    let mut f = objective(instance, b, &x);
    let mut best_x = x.clone();
    let mut best_f = f;

    let mut list = TabuList {
        tenure: params.tenure,
        entries: VecDeque::with_capacity(params.tenure + 1),
    };
    list.push(&packed);

    let mut blocked = vec![false; k];
    let mut trace = Vec::with_capacity(params.max_steps);
    let mut iterations = 0;
    let mut evaluations = 1;
    let mut stale = 0;
    let mut stopped_early = false;

    for _ in 0..params.max_steps {
        list.mark_blocked(&packed, &mut blocked);
        let mut choice: Option<(usize, f64)> = None;
        for i in 0..k {
            let d = (1.0 - 2.0 * x[i] as f64) * field[i];
            if blocked[i] && !(params.aspiration && f + d < best_f) {
                continue;
            }
            if choice.is_none_or(|(_, bd)| d < bd) {
                choice = Some((i, d));
            }
        }
        evaluations += k;
        let Some((i, d)) = choice else {
            stopped_early = true;
            break;
        };

        let step = if x[i] == 0 { 1.0 } else { -1.0 };
        x[i] ^= 1;
        packed[i / 64] ^= 1 << (i % 64);
        f += d;
        for (j, v) in instance.coupling().row(i) {
            field[j] += v * step;
        }
        list.push(&packed);
        iterations += 1;

        if f < best_f {
            best_f = f;
            best_x.copy_from_slice(&x);
            stale = 0;
        } else {
            stale += 1;
        }
        trace.push(best_f);
        if params.patience.is_some_and(|p| stale >= p) {
            break;
        }
    }

    let f_best = objective(instance, b, &best_x);
    SolverResult {
        solver: name.to_string(),
        x_best: BinaryAssignment::new(best_x).expect("flips keep entries binary"),
        f_best,
        iterations,
        evaluations,
        elapsed_ms: clock.elapsed_ms(),
        trace: Some(trace),
        stopped_early,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::{evaluate, gen_random_dense, InstanceMeta};
    use crate::rng;
    use crate::solvers::exhaustive_solve;

    fn pair() -> (QuboInstance, ObservedVector) {
        let inst = QuboInstance::new(2, vec![(0, 1, 1.0)], InstanceMeta::default()).unwrap();
        (inst, ObservedVector::new(vec![-1.0, 0.5]).unwrap())
    }

    #[test]
    fn first_step_takes_best_flip() {
        let (inst, b) = pair();
        let mut p = TabuParams::new(2);
        p.max_steps = 1;
        let r = tabu_solve(&inst, &b, &p).unwrap();
        assert_eq!(r.x_best.as_slice(), &[1, 0]);
        assert_eq!(r.f_best, -1.0);
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn optimal_start_is_kept() {
        let (inst, b) = pair();
        for steps in [1, 5, 50] {
            let mut p = TabuParams::new(2);
            p.max_steps = steps;
            p.start = BinaryAssignment::new(vec![1, 0]).unwrap();
            assert_eq!(tabu_solve(&inst, &b, &p).unwrap().f_best, -1.0);
        }
    }

    #[test]
    fn all_neighbours_tabu_stops_early() {
        // k = 1: after one move the only neighbour is the start, which is tabu.
        let inst = QuboInstance::new(1, vec![], InstanceMeta::default()).unwrap();
        let b = ObservedVector::new(vec![-1.0]).unwrap();
        let mut p = TabuParams::new(1);
        p.patience = None;
        let r = tabu_solve(&inst, &b, &p).unwrap();
        assert!(r.stopped_early);
        assert_eq!(r.iterations, 1);
        assert_eq!(r.x_best.as_slice(), &[1]);
    }

    #[test]
    fn zero_tenure_oscillates_but_keeps_best() {
        let (inst, b) = pair();
        let mut p = TabuParams::new(2);
        p.tenure = 0;
        p.patience = None;
        p.max_steps = 7;
        let r = tabu_solve(&inst, &b, &p).unwrap();
        assert_eq!(r.iterations, 7);
        assert_eq!(r.f_best, -1.0);
    }

    #[test]
    fn trace_is_monotone_and_result_consistent() {
        for seed in 0..20 {
            let inst = gen_random_dense(16, seed, 1.0);
            let b = ObservedVector::new(rng::normal_vec(&mut rng::stream(seed), 16)).unwrap();
            let mut p = TabuParams::new(16);
            p.max_steps = 300;
            p.patience = None;
            let r = tabu_solve(&inst, &b, &p).unwrap();
            let trace = r.trace.as_ref().unwrap();
            assert!(trace.windows(2).all(|w| w[1] <= w[0]));
            assert!((r.f_best - evaluate(&inst, &b, &r.x_best).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn list_blocks_exact_revisits() {
        let list = TabuList {
            tenure: 3,
            entries: [pack(&[1, 0, 0]), pack(&[1, 1, 0]), pack(&[0, 1, 1])].into(),
        };
        let mut blocked = [false; 3];
        list.mark_blocked(&pack(&[1, 1, 1]), &mut blocked);
        // [1,1,0] differs in bit 2; [0,1,1] in bit 0; [1,0,0] in two bits
        assert_eq!(blocked, [true, false, true]);
    }

    #[test]
    fn refine_never_worse_than_start() {
        let inst = gen_random_dense(12, 4, 1.0);
        let mut r = rng::stream(9);
        for _ in 0..50 {
            let b = ObservedVector::new(rng::normal_vec(&mut r, 12)).unwrap();
            let start = BinaryAssignment::from_mask(rand::Rng::random::<u64>(&mut r) & 0xfff, 12);
            let res = refine_with_tabu(&inst, &b, &start, 10).unwrap();
            assert!(res.f_best <= evaluate(&inst, &b, &start).unwrap());
        }
        let b = ObservedVector::zeros(12);
        let res = refine_with_tabu(&inst, &b, &BinaryAssignment::zeros(12), 0).unwrap();
        assert_eq!(res.iterations, 0);
    }

    #[test]
    fn small_instances_reach_optimum() {
        let mut hits = 0;
        for seed in 0..30 {
            let inst = gen_random_dense(10, seed, 1.0);
            let b = ObservedVector::new(rng::normal_vec(&mut rng::stream(seed + 1000), 10)).unwrap();
            let mut p = TabuParams::new(10);
            p.max_steps = 200;
            let r = tabu_solve(&inst, &b, &p).unwrap();
            let opt = exhaustive_solve(&inst, &b).unwrap();
            if (r.f_best - opt.f_best).abs() < 1e-9 {
                hits += 1;
            }
        }
        assert!(hits >= 27, "{hits}/30");
    }
}
